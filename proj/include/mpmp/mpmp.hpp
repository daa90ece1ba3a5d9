// Copyright 2026 The mpmp Authors.
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

// Convenience umbrella: the whole library.

#ifndef MPMP_MPMP_HPP_
#define MPMP_MPMP_HPP_

#include "mpmp/config.hpp"
#include "mpmp/dynamics.hpp"
#include "mpmp/errors.hpp"
#include "mpmp/experiments.hpp"
#include "mpmp/games.hpp"
#include "mpmp/model.hpp"
#include "mpmp/numerics.hpp"
#include "mpmp/random.hpp"
#include "mpmp/serialize.hpp"

#endif  // MPMP_MPMP_HPP_
