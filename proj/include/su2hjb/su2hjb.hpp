// Copyright 2026 The su2hjb Authors
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

#include "su2hjb/dynamics.hpp"
#include "su2hjb/error.hpp"
#include "su2hjb/hjb_solver.hpp"
#include "su2hjb/io.hpp"
#include "su2hjb/oracle.hpp"
#include "su2hjb/su2.hpp"
#include "su2hjb/synthesis.hpp"
