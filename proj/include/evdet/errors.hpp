// Copyright 2026-present the evdet project
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

namespace evdet {

// Condition codes carried by Error. The CLI maps Error::Kind to process exit
// codes; tests match on the code to pin which precondition fired.
enum class Errc {
    // config
    invalid_config,
    invalid_argument,
    // data
    parse_error,
    io_error,
    empty_corpus,
    empty_source,
    empty_model,
    empty_input,
    empty_collection,
    empty_list,
    empty_background,
    dimension_mismatch,
    id_mismatch,
    single_class,
    insufficient_samples,
    insufficient_events,
    no_positives,
    all_undefined,
    // numeric
    non_convergence,
};

class Error : public std::runtime_error {
  public:
    enum class Kind { config, data, numeric };

    Error(Kind kind, Errc code, const std::string& message)
        : std::runtime_error(message), kind_(kind), code_(code) {}

    Kind kind() const { return kind_; }
    Errc code() const { return code_; }

    // Exit code contract: 2 config, 3 data, 4 numeric.
    int exit_code() const {
        switch (kind_) {
        case Kind::config: return 2;
        case Kind::data: return 3;
        case Kind::numeric: return 4;
        }
        return 3;
    }

  private:
    Kind kind_;
    Errc code_;
};

inline Error config_error(Errc code, const std::string& message) {
    return Error(Error::Kind::config, code, message);
}

inline Error data_error(Errc code, const std::string& message) {
    return Error(Error::Kind::data, code, message);
}

inline Error numeric_error(Errc code, const std::string& message) {
    return Error(Error::Kind::numeric, code, message);
}

}  // namespace evdet
