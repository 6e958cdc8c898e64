// Copyright 2026 The topicgen Authors.
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

#include "topicgen/analytics.hpp"
#include "topicgen/chunker.hpp"
#include "topicgen/combiner.hpp"
#include "topicgen/error.hpp"
#include "topicgen/eval_bootstrap.hpp"
#include "topicgen/io_formats.hpp"
#include "topicgen/pipeline.hpp"
#include "topicgen/postprocessor.hpp"
#include "topicgen/random.hpp"
#include "topicgen/span_model.hpp"
#include "topicgen/utf8.hpp"
