// Copyright 2026 The pseudomeasure-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace pml {

/// Violated precondition on an operation's inputs.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Operands defined on different grids.
class GridMismatch : public InvalidArgument {
public:
    GridMismatch() : InvalidArgument("operands live on different grids") {}
};

/// A partial (table-backed) pseudomeasure was probed on a set it does not know.
class Unevaluable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace pml
