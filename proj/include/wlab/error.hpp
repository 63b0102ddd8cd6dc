// SPDX-License-Identifier: Apache-2.0
//
// waveform-lab: filtered-OFDM link-level waveform simulation
// Copyright (C) 2026 The waveform-lab Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace wlab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters or an inconsistent scenario.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed scenario, profile or tap file.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Buffer length or shape mismatch at run time.
class SignalError : public Error {
public:
    using Error::Error;
};

} // namespace wlab
