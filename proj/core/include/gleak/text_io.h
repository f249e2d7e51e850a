// Copyright 2026 The gleak Authors
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

#ifndef GLEAK_TEXT_IO_H_
#define GLEAK_TEXT_IO_H_

#include <functional>
#include <iosfwd>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "gleak/qif.h"
#include "gleak/sampling.h"

// Plain-text formats:
//   channel:  "|X| |Y|" then |X| lines of |Y| decimals
//   prior:    one line of |X| decimals
//   gain:     "|W| |X|" then |W| lines of |X| decimals
//   samples:  CSV lines "x_label,y_encoding"
// Alphabets are indexed ("0".."n-1") unless supplied by the caller.

namespace gleak {

absl::StatusOr<Channel> ParseChannel(std::istream& in);
absl::StatusOr<Prior> ParsePrior(std::istream& in);
absl::StatusOr<GainFunction> ParseGain(std::istream& in);
absl::StatusOr<SampleSet> ParseSampleSet(std::istream& in,
                                         const Alphabet& secrets);

void WriteChannel(std::ostream& out, const Channel& channel);
void WritePrior(std::ostream& out, const Prior& prior);
void WriteGain(std::ostream& out, const GainFunction& gain);
void WriteSampleSet(std::ostream& out, const SampleSet& samples);

absl::StatusOr<Channel> ReadChannelFile(const std::string& path);
absl::StatusOr<Prior> ReadPriorFile(const std::string& path);
absl::StatusOr<GainFunction> ReadGainFile(const std::string& path);
absl::StatusOr<SampleSet> ReadSampleSetFile(const std::string& path,
                                            const Alphabet& secrets);

// Writes `contents` via `writer` to `path`, reporting open/write failures.
absl::Status WriteFile(const std::string& path,
                       const std::function<void(std::ostream&)>& writer);

}  // namespace gleak

#endif  // GLEAK_TEXT_IO_H_
