// Copyright 2026 The edgeforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
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

namespace edgeforge {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Zero-sized or mismatched raster dimensions.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Even-sided, non-square or otherwise malformed kernel.
class InvalidKernelError : public Error {
public:
    using Error::Error;
};

/// Gx/Gy kernels that do not form an (x, y) pair of equal size.
class InvalidPairError : public Error {
public:
    using Error::Error;
};

/// Out-of-range numeric parameter (sigma, radius, fraction...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Unknown operator name or kernel size.
class LookupError : public Error {
public:
    using Error::Error;
};

class SingularFitError : public Error {
public:
    using Error::Error;
};

/// Raised by Otsu when the histogram holds fewer than two distinct values.
class NoContrastError : public Error {
public:
    using Error::Error;
};

/// Unreadable, missing or malformed image file.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace edgeforge
