// Copyright 2026 The bosonlab Authors
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

#include "bosonlab/distribution.hpp"
#include "bosonlab/embedding.hpp"
#include "bosonlab/errors.hpp"
#include "bosonlab/fock.hpp"
#include "bosonlab/gbs.hpp"
#include "bosonlab/interpolation.hpp"
#include "bosonlab/matrix.hpp"
#include "bosonlab/permanent.hpp"
#include "bosonlab/randmat.hpp"
#include "bosonlab/report.hpp"
#include "bosonlab/rng.hpp"
#include "bosonlab/stats.hpp"
