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

#ifndef CLUSTERFORGE_ERRORS_H
#define CLUSTERFORGE_ERRORS_H

#include <stdexcept>
#include <string>

namespace clusterforge {

/// Requested a register of an unusable size (for example zero qubits).
struct InvalidSize : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Qubit index out of range, repeated where distinct qubits are required, or dead.
struct InvalidQubit : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Two objects that must cover the same number of qubits do not.
struct LengthMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A protocol asked the fabric to do something the physical model forbids,
/// such as attempting a gate on a destroyed qubit.
struct ProtocolLogicError : std::logic_error {
    using std::logic_error::logic_error;
};

/// fuse_interior was called on a qubit that is not an interior path vertex.
struct InvalidFusion : std::logic_error {
    using std::logic_error::logic_error;
};

/// The exact backend would need more qubits than its configured cap.
struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An internal consistency audit failed.
struct AuditFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace clusterforge

#endif
