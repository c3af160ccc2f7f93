/*
 Copyright 2026 The PLAID-cpp Authors
 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include <string>

#include <doctest.h>

#include "plaid/error.hpp"

#define PLAID_CHECK_CODE(expr, expected)                                                  \
    do {                                                                                  \
        std::string plaid_caught_ = "no exception";                                       \
        try {                                                                             \
            (void)(expr);                                                                 \
        } catch (const plaid::Error& e) {                                                 \
            plaid_caught_ = std::string(plaid::to_string(e.code()));                      \
        }                                                                                 \
        CHECK(plaid_caught_ == std::string(plaid::to_string(expected)));                  \
    } while (0)
