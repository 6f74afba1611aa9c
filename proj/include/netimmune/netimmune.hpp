// Copyright 2026 The Authors.
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

#ifndef NETIMMUNE_NETIMMUNE_HPP_
#define NETIMMUNE_NETIMMUNE_HPP_

#include "netimmune/bounds.hpp"
#include "netimmune/cascade.hpp"
#include "netimmune/core.hpp"
#include "netimmune/generate.hpp"
#include "netimmune/graph.hpp"
#include "netimmune/groups.hpp"
#include "netimmune/immunize.hpp"
#include "netimmune/io.hpp"
#include "netimmune/oracle.hpp"
#include "netimmune/sweep.hpp"
#include "netimmune/transforms.hpp"

#endif  // NETIMMUNE_NETIMMUNE_HPP_
