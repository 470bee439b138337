// mimoq - uplink massive MIMO dynamic scheduling and power control simulator
// Copyright (C) 2026 the mimoq authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Runs the built-in cross-checks: closed-form solver outputs against brute
// force references, and structural invariants of the simulator.

#include "verify.hpp"

#include <cstdio>

int main()
{
    std::vector<mimoq::CheckResult> checks = mimoq::verify_all();
    std::fputs(mimoq::format_report(checks).c_str(), stdout);
    return mimoq::all_passed(checks) ? 0 : 1;
}
