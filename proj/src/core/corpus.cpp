/*
 * Copyright 2026 The causal-calib Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "causal_calib/corpus.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "causal_calib/error.hpp"
#include "causal_calib/text.hpp"

namespace causal_calib {

std::vector<LabeledText> read_corpus_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file: " + path.string());
  return parse_corpus_jsonl(in, path.string());
}

std::vector<LabeledText> parse_corpus_jsonl(std::istream& in, std::string_view source) {
  std::vector<LabeledText> out;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw ValidationError(std::string(source) + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view cleaned = text::clean_line(line);
    if (text::trim(cleaned).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(cleaned);
    } catch (const nlohmann::json::parse_error&) {
      fail("malformed JSON");
    }
    if (!j.is_object()) fail("expected a JSON object");
    if (!j.contains("label") || !j["label"].is_string()) fail("missing string field \"label\"");
    if (!j.contains("text") || !j["text"].is_string()) fail("missing string field \"text\"");
    out.push_back({j["label"].get<std::string>(), j["text"].get<std::string>()});
    if (out.back().label.empty()) fail("empty label");
  }
  return out;
}

void write_corpus_jsonl(std::ostream& out, const std::vector<LabeledText>& corpus) {
  for (const auto& doc : corpus) {
    out << nlohmann::json{{"label", doc.label}, {"text", doc.text}}.dump() << '\n';
  }
}

}  // namespace causal_calib
