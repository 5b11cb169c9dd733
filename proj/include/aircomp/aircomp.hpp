// Copyright 2026 The aircomp-irs Authors
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

#pragma once

#include "aircomp/channel.hpp"
#include "aircomp/config.hpp"
#include "aircomp/detector.hpp"
#include "aircomp/experiments.hpp"
#include "aircomp/optimizer.hpp"
#include "aircomp/phase_opt.hpp"
#include "aircomp/rng.hpp"
#include "aircomp/scenario.hpp"
#include "aircomp/sdp.hpp"
#include "aircomp/system.hpp"
#include "aircomp/types.hpp"
