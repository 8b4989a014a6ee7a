// Copyright 2026 The DKG Toolkit Authors.
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

#include "dkg/config.hpp"
#include "dkg/corpus.hpp"
#include "dkg/dependency.hpp"
#include "dkg/embeddings.hpp"
#include "dkg/error.hpp"
#include "dkg/graph.hpp"
#include "dkg/parallel.hpp"
#include "dkg/paths.hpp"
#include "dkg/pattern.hpp"
#include "dkg/pattern_db.hpp"
#include "dkg/pipeline.hpp"
#include "dkg/scoring.hpp"
