/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The usbeam Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef USBEAM_ERROR_HPP
#define USBEAM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace usbeam {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument does not hold.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A file does not follow the expected binary layout.
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace usbeam

#endif  // USBEAM_ERROR_HPP
