// Copyright 2026 The thermoqfi Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "channel.hpp"
#include "dephasing_law.hpp"
#include "errors.hpp"
#include "estimation.hpp"
#include "io.hpp"
#include "linalg.hpp"
#include "nonmarkov.hpp"
#include "optimize.hpp"
#include "probe.hpp"
#include "purification.hpp"
#include "qfi.hpp"
#include "ramsey.hpp"
#include "regime.hpp"
#include "temperature_model.hpp"
