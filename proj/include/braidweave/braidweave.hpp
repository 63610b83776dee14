// Copyright 2026 The Braidweave Authors
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

#include "braidweave/canonical.hpp"
#include "braidweave/diagnostics.hpp"
#include "braidweave/digest.hpp"
#include "braidweave/geometry.hpp"
#include "braidweave/icm.hpp"
#include "braidweave/moves.hpp"
#include "braidweave/optimizer.hpp"
#include "braidweave/point.hpp"
#include "braidweave/resources.hpp"
#include "braidweave/service.hpp"
#include "braidweave/topology.hpp"
#include "braidweave/tqc.hpp"
