// Copyright 2026 The nhep Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include "nhep/errors.hpp"
#include "nhep/state.hpp"
#include "nhep/model.hpp"
#include "nhep/entanglement.hpp"
#include "nhep/sideband.hpp"
#include "nhep/dynamics.hpp"
#include "nhep/random.hpp"
#include "nhep/parallel.hpp"
#include "nhep/measurement.hpp"
#include "nhep/nelder_mead.hpp"
#include "nhep/spectro.hpp"
