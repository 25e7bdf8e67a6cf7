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

#include "dapt/jsonl.hpp"

#include <sstream>

#include "dapt/errors.hpp"

namespace dapt::io {

namespace fs = std::filesystem;

AtomicFile::AtomicFile(fs::path path) : path_(std::move(path)) {
  if (path_.has_parent_path()) fs::create_directories(path_.parent_path());
  tmp_ = path_;
  tmp_ += ".tmp";
  out_.open(tmp_, std::ios::binary | std::ios::trunc);
  if (!out_) throw DataError("cannot open for writing: " + tmp_.string());
}

AtomicFile::~AtomicFile() {
  if (!committed_) {
    out_.close();
    std::error_code ec;
    fs::remove(tmp_, ec);
  }
}

void AtomicFile::commit() {
  out_.flush();
  if (!out_) throw DataError("write failed: " + tmp_.string());
  out_.close();
  fs::rename(tmp_, path_);
  committed_ = true;
}

void write_text_atomic(const fs::path& path, const std::string& content) {
  AtomicFile file(path);
  file.stream() << content;
  file.commit();
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void for_each_jsonl(const fs::path& path,
                    const std::function<void(const json&, std::size_t)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": invalid JSON (" + e.what() + ")");
    }
    if (!obj.is_object())
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected a JSON object");
    try {
      fn(obj, line_no);
    } catch (const DataError& e) {
      throw DataError(path.string() + ":" + e.what());
    }
  }
}

std::string get_string(const json& obj, const char* field, std::size_t line) {
  const auto it = obj.find(field);
  if (it == obj.end() || !it->is_string())
    throw DataError(std::to_string(line) + ": field \"" + field +
                    "\" missing or not a string");
  return it->get<std::string>();
}

std::int64_t get_int(const json& obj, const char* field, std::size_t line) {
  const auto it = obj.find(field);
  if (it == obj.end() || !it->is_number_integer())
    throw DataError(std::to_string(line) + ": field \"" + field +
                    "\" missing or not an integer");
  return it->get<std::int64_t>();
}

json to_json(const Document& d) {
  return json{{"id", d.id}, {"domain", d.domain}, {"text", d.text}};
}

json to_json(const SentenceRecord& s) {
  return json{{"sent_id", s.sent_id}, {"doc_id", s.doc_id}, {"idx", s.idx},
              {"text", s.text},       {"token_count", s.token_count}};
}

json to_json(const PackedSequence& s) {
  return json{{"seq_id", s.seq_id}, {"doc_id", s.doc_id}, {"tokens", s.tokens}};
}

Document document_from_json(const json& obj, std::size_t line) {
  return {get_string(obj, "id", line), get_string(obj, "domain", line),
          get_string(obj, "text", line)};
}

SentenceRecord sentence_from_json(const json& obj, std::size_t line) {
  SentenceRecord s;
  s.sent_id = get_string(obj, "sent_id", line);
  s.doc_id = get_string(obj, "doc_id", line);
  const auto idx = get_int(obj, "idx", line);
  const auto count = get_int(obj, "token_count", line);
  if (idx < 0) throw DataError(std::to_string(line) + ": field \"idx\" is negative");
  if (count < 0)
    throw DataError(std::to_string(line) + ": field \"token_count\" is negative");
  s.idx = static_cast<std::size_t>(idx);
  s.token_count = static_cast<std::size_t>(count);
  s.text = get_string(obj, "text", line);
  return s;
}

PackedSequence sequence_from_json(const json& obj, std::size_t line) {
  PackedSequence s;
  s.seq_id = get_string(obj, "seq_id", line);
  s.doc_id = get_string(obj, "doc_id", line);
  const auto it = obj.find("tokens");
  if (it == obj.end() || !it->is_array())
    throw DataError(std::to_string(line) + ": field \"tokens\" missing or not an array");
  for (const auto& t : *it) {
    if (!t.is_string())
      throw DataError(std::to_string(line) + ": field \"tokens\" has a non-string entry");
    s.tokens.push_back(t.get<std::string>());
  }
  return s;
}

std::vector<Document> read_documents(const fs::path& path) {
  std::vector<Document> out;
  for_each_jsonl(path, [&](const json& obj, std::size_t line) {
    out.push_back(document_from_json(obj, line));
  });
  return out;
}

std::vector<SentenceRecord> read_sentences(const fs::path& path) {
  std::vector<SentenceRecord> out;
  for_each_jsonl(path, [&](const json& obj, std::size_t line) {
    out.push_back(sentence_from_json(obj, line));
  });
  return out;
}

std::vector<PackedSequence> read_sequences(const fs::path& path) {
  std::vector<PackedSequence> out;
  for_each_jsonl(path, [&](const json& obj, std::size_t line) {
    out.push_back(sequence_from_json(obj, line));
  });
  return out;
}

}  // namespace dapt::io
