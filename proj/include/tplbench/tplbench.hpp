// Copyright 2026 The tpl-bench Authors
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

#include "tplbench/ablation.hpp"
#include "tplbench/backend.hpp"
#include "tplbench/coordinate.hpp"
#include "tplbench/corpus.hpp"
#include "tplbench/errors.hpp"
#include "tplbench/maven_list.hpp"
#include "tplbench/metrics.hpp"
#include "tplbench/penalty.hpp"
#include "tplbench/popularity.hpp"
#include "tplbench/prompting.hpp"
#include "tplbench/readme.hpp"
#include "tplbench/recommendation.hpp"
#include "tplbench/rerank.hpp"
#include "tplbench/split.hpp"
#include "tplbench/transport.hpp"
