// Copyright 2026 The lenbeam Authors.
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

#include "lenbeam/biased_model.hpp"
#include "lenbeam/dataset.hpp"
#include "lenbeam/driver.hpp"
#include "lenbeam/error.hpp"
#include "lenbeam/eval.hpp"
#include "lenbeam/fused_scorer.hpp"
#include "lenbeam/heuristics.hpp"
#include "lenbeam/hypothesis.hpp"
#include "lenbeam/log_prob.hpp"
#include "lenbeam/model_io.hpp"
#include "lenbeam/oracle.hpp"
#include "lenbeam/proposed_search.hpp"
#include "lenbeam/pruning.hpp"
#include "lenbeam/random_model.hpp"
#include "lenbeam/scorer.hpp"
#include "lenbeam/simple_search.hpp"
#include "lenbeam/suites.hpp"
#include "lenbeam/table_model.hpp"
#include "lenbeam/vocabulary.hpp"
