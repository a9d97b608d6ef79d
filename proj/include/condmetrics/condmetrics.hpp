/* Copyright 2026 The condmetrics Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include "condmetrics/error.hpp"
#include "condmetrics/types.hpp"
#include "condmetrics/random.hpp"
#include "condmetrics/parallel.hpp"
#include "condmetrics/gaussian.hpp"
#include "condmetrics/inception.hpp"
#include "condmetrics/matching.hpp"
#include "condmetrics/report.hpp"
#include "condmetrics/frechet_metrics.hpp"
#include "condmetrics/evaluate.hpp"
#include "condmetrics/synth.hpp"
#include "condmetrics/experiments.hpp"
#include "condmetrics/tensor_io.hpp"
#include "condmetrics/commands.hpp"
