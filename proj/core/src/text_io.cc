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

#include "gleak/text_io.h"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/strip.h"
#include "gleak/status_macros.h"
#include "string_compat.h"

namespace gleak {
namespace {

std::string FormatDouble(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

absl::StatusOr<std::size_t> ReadCount(std::istream& in, std::string_view what) {
  long long n = 0;
  if (!(in >> n) || n <= 0) {
    return absl::InvalidArgumentError(absl::StrCat("expected positive ", internal::Av(what)));
  }
  return static_cast<std::size_t>(n);
}

absl::StatusOr<Matrix> ReadMatrix(std::istream& in, std::size_t rows,
                                  std::size_t cols, std::string_view what) {
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (!(in >> m(r, c))) {
        return absl::InvalidArgumentError(absl::StrCat(
            internal::Av(what), ": expected ", rows * cols, " values, ran out at row ", r,
            " column ", c));
      }
    }
  }
  std::string extra;
  if (in >> extra) {
    return absl::InvalidArgumentError(absl::StrCat(internal::Av(what), ": trailing data"));
  }
  return m;
}

void WriteMatrixRows(std::ostream& out, const Matrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out << ' ';
      out << FormatDouble(m(r, c));
    }
    out << '\n';
  }
}

template <typename T, typename Parser>
absl::StatusOr<T> ParseFile(const std::string& path, Parser parse) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open '", path, "'"));
  return parse(in);
}

}  // namespace

absl::StatusOr<Channel> ParseChannel(std::istream& in) {
  GLEAK_ASSIGN_OR_RETURN(std::size_t nx, ReadCount(in, "|X|"));
  GLEAK_ASSIGN_OR_RETURN(std::size_t ny, ReadCount(in, "|Y|"));
  GLEAK_ASSIGN_OR_RETURN(Matrix m, ReadMatrix(in, nx, ny, "channel"));
  return Channel::Create(Alphabet::Indexed(nx), Alphabet::Indexed(ny), std::move(m));
}

absl::StatusOr<Prior> ParsePrior(std::istream& in) {
  std::vector<double> probs;
  double v;
  while (in >> v) probs.push_back(v);
  if (!in.eof()) return absl::InvalidArgumentError("prior: malformed number");
  if (probs.empty()) return absl::InvalidArgumentError("prior: no entries");
  const std::size_t n = probs.size();
  return Prior::Create(Alphabet::Indexed(n), std::move(probs));
}

absl::StatusOr<GainFunction> ParseGain(std::istream& in) {
  GLEAK_ASSIGN_OR_RETURN(std::size_t nw, ReadCount(in, "|W|"));
  GLEAK_ASSIGN_OR_RETURN(std::size_t nx, ReadCount(in, "|X|"));
  GLEAK_ASSIGN_OR_RETURN(Matrix m, ReadMatrix(in, nw, nx, "gain"));
  return GainFunction::Create(Alphabet::Indexed(nw), Alphabet::Indexed(nx),
                              std::move(m));
}

absl::StatusOr<SampleSet> ParseSampleSet(std::istream& in,
                                         const Alphabet& secrets) {
  std::vector<LabeledSample> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = internal::Sv(absl::StripAsciiWhitespace(line));
    if (view.empty()) continue;
    const auto comma = view.find(',');
    if (comma == std::string_view::npos) {
      return absl::InvalidArgumentError(
          absl::StrCat("samples line ", lineno, ": expected 'x_label,y_encoding'"));
    }
    const auto x = secrets.IndexOf(view.substr(0, comma));
    if (!x) {
      return absl::InvalidArgumentError(absl::StrCat(
          "samples line ", lineno, ": unknown secret '", internal::Av(view.substr(0, comma)), "'"));
    }
    GLEAK_ASSIGN_OR_RETURN(Observable y, Observable::Decode(view.substr(comma + 1)));
    pairs.push_back({*x, y});
  }
  return SampleSet::Create(secrets, std::move(pairs));
}

void WriteChannel(std::ostream& out, const Channel& channel) {
  out << channel.input().size() << ' ' << channel.output().size() << '\n';
  WriteMatrixRows(out, channel.matrix());
}

void WritePrior(std::ostream& out, const Prior& prior) {
  for (std::size_t i = 0; i < prior.size(); ++i) {
    if (i) out << ' ';
    out << FormatDouble(prior[i]);
  }
  out << '\n';
}

void WriteGain(std::ostream& out, const GainFunction& gain) {
  out << gain.num_guesses() << ' ' << gain.num_secrets() << '\n';
  // Stored entries are shifted to be non-negative; write original units.
  Matrix original = gain.matrix();
  for (std::size_t w = 0; w < original.rows(); ++w) {
    for (double& v : original.row(w)) v -= gain.offset();
  }
  WriteMatrixRows(out, original);
}

void WriteSampleSet(std::ostream& out, const SampleSet& samples) {
  for (const auto& [x, y] : samples.pairs()) {
    out << samples.secrets().label(x) << ',' << y.Encode() << '\n';
  }
}

absl::StatusOr<Channel> ReadChannelFile(const std::string& path) {
  return ParseFile<Channel>(path, [](std::istream& in) { return ParseChannel(in); });
}

absl::StatusOr<Prior> ReadPriorFile(const std::string& path) {
  return ParseFile<Prior>(path, [](std::istream& in) { return ParsePrior(in); });
}

absl::StatusOr<GainFunction> ReadGainFile(const std::string& path) {
  return ParseFile<GainFunction>(path,
                                 [](std::istream& in) { return ParseGain(in); });
}

absl::StatusOr<SampleSet> ReadSampleSetFile(const std::string& path,
                                            const Alphabet& secrets) {
  return ParseFile<SampleSet>(
      path, [&](std::istream& in) { return ParseSampleSet(in, secrets); });
}

absl::Status WriteFile(const std::string& path,
                       const std::function<void(std::ostream&)>& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write '", path, "'"));
  writer(out);
  out.flush();
  if (!out) return absl::DataLossError(absl::StrCat("write to '", path, "' failed"));
  return absl::OkStatus();
}

}  // namespace gleak
