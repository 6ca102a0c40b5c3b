// Copyright 2026 The qinstr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QINSTR_QINSTR_HPP
#define QINSTR_QINSTR_HPP

#include "qinstr/config.hpp"
#include "qinstr/linalg.hpp"
#include "qinstr/rng.hpp"
#include "qinstr/channels.hpp"
#include "qinstr/instruments.hpp"
#include "qinstr/metrics.hpp"
#include "qinstr/sdp.hpp"
#include "qinstr/oracle.hpp"
#include "qinstr/random_models.hpp"
#include "qinstr/verify.hpp"
#include "qinstr/io.hpp"

#endif  // QINSTR_QINSTR_HPP
