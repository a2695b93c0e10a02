// Copyright (c) 2026 The tsot Authors. All Rights Reserved.
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

#ifndef TSOT_CLI_H_
#define TSOT_CLI_H_

namespace tsot {

enum ExitCode : int {
  kExitOk = 0,
  kExitDiagnostics = 1,  // ran to completion, input had issues
  kExitFatal = 2,        // bad flags, unreadable input, internal error
};

// Entry point of the `tsot` executable: build, demux, stats, eval, laal,
// synth, study. Diagnostics go to stderr as one JSON object per line.
int RunCli(int argc, const char* const* argv);

}  // namespace tsot

#endif  // TSOT_CLI_H_
