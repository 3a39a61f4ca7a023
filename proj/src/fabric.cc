// Copyright 2026 The clusterforge Authors
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


#include "clusterforge/fabric.h"

namespace clusterforge {

FabricCore::FabricCore(const ProtocolParams &params)
    : params_(params), gate_(params.p), gate_rng_(params.seed) {
    params_.validate();
}

bool FabricCore::attempt_gate() {
    ledger_.cpf_attempts++;
    ledger_.elapsed_time += 1;
    bool ok = gate_(gate_rng_);
    ledger_.cpf_successes += ok;
    return ok;
}

}  // namespace clusterforge
