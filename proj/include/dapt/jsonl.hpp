// Copyright 2026 The dapt Authors.
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

#ifndef DAPT_JSONL_HPP_
#define DAPT_JSONL_HPP_

#include <filesystem>
#include <fstream>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "dapt/corpus.hpp"

namespace dapt::io {

using json = nlohmann::ordered_json;

/// Writes to `<path>.tmp` and renames over `path` on commit(). An
/// uncommitted file is removed on destruction.
class AtomicFile {
 public:
  explicit AtomicFile(std::filesystem::path path);
  AtomicFile(const AtomicFile&) = delete;
  AtomicFile& operator=(const AtomicFile&) = delete;
  ~AtomicFile();

  std::ostream& stream() { return out_; }
  void commit();

 private:
  std::filesystem::path path_;
  std::filesystem::path tmp_;
  std::ofstream out_;
  bool committed_ = false;
};

void write_text_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

/// Calls `fn(object, line_number)` for each non-blank line. Parse failures
/// and non-object lines throw DataError naming the file and line.
void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(const json&, std::size_t)>& fn);

/// Field accessors that throw DataError naming the field and line.
std::string get_string(const json& obj, const char* field, std::size_t line);
std::int64_t get_int(const json& obj, const char* field, std::size_t line);

json to_json(const Document& d);
json to_json(const SentenceRecord& s);
json to_json(const PackedSequence& s);
Document document_from_json(const json& obj, std::size_t line);
SentenceRecord sentence_from_json(const json& obj, std::size_t line);
PackedSequence sequence_from_json(const json& obj, std::size_t line);

std::vector<Document> read_documents(const std::filesystem::path& path);
std::vector<SentenceRecord> read_sentences(const std::filesystem::path& path);
std::vector<PackedSequence> read_sequences(const std::filesystem::path& path);

/// One compact JSON object per line, LF-terminated.
template <typename T>
void write_jsonl(const std::filesystem::path& path, std::span<const T> items) {
  AtomicFile file(path);
  for (const auto& item : items) file.stream() << to_json(item).dump() << '\n';
  file.commit();
}

}  // namespace dapt::io

#endif  // DAPT_JSONL_HPP_
