// Copyright 2026 The depthaug Authors.
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

#include "depthaug/core.hpp"
#include "depthaug/geometry.hpp"
#include "depthaug/viewsphere.hpp"
#include "depthaug/renderer.hpp"
#include "depthaug/procnoise.hpp"
#include "depthaug/augment.hpp"
#include "depthaug/losses.hpp"
#include "depthaug/evalkit.hpp"
#include "depthaug/datapack.hpp"
#include "depthaug/dataset.hpp"
