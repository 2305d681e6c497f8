// SPDX-License-Identifier: Apache-2.0
//
// mprsim - slotted MAC simulator for multi-packet reception channels
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef MPRSIM_ERRORS_HPP
#define MPRSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mprsim
{

// Base for every error raised by the library. The C API maps each subclass
// onto one status code.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

class MatrixError : public Error
{
  public:
    using Error::Error;
};

class RowLengthError : public MatrixError
{
  public:
    using MatrixError::MatrixError;
};

class ProbabilityRangeError : public MatrixError
{
  public:
    using MatrixError::MatrixError;
};

class RowSumError : public MatrixError
{
  public:
    using MatrixError::MatrixError;
};

class IndexError : public Error
{
  public:
    using Error::Error;
};

class StateError : public Error
{
  public:
    using Error::Error;
};

class ConfigError : public Error
{
  public:
    using Error::Error;
};

class ConfigMismatchError : public Error
{
  public:
    using Error::Error;
};

class IoError : public Error
{
  public:
    using Error::Error;
};

} // namespace mprsim

#endif
