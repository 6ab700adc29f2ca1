// Copyright 2026 The SPARQAL Authors
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

#include "sparqal/solutions.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstdint>
#include <cstring>
#include <system_error>

namespace sparqal {

namespace {

class SpillFile {
 public:
  explicit SpillFile(const std::filesystem::path& directory) {
    auto dir = directory.empty() ? std::filesystem::temp_directory_path() : directory;
    std::string pattern = (dir / "sparqal-spill-XXXXXX").string();
    fd_ = ::mkstemp(pattern.data());
    if (fd_ < 0) throw std::system_error(errno, std::generic_category(), "cannot create spill file in " + dir.string());
    ::unlink(pattern.c_str());
  }
  ~SpillFile() {
    if (fd_ >= 0) ::close(fd_);
  }
  SpillFile(const SpillFile&) = delete;
  SpillFile& operator=(const SpillFile&) = delete;

  void append(const std::string& bytes) {
    std::size_t done = 0;
    while (done < bytes.size()) {
      auto n = ::pwrite(fd_, bytes.data() + done, bytes.size() - done, static_cast<off_t>(size_ + done));
      if (n < 0) {
        if (errno == EINTR) continue;
        throw std::system_error(errno, std::generic_category(), "spill write failed");
      }
      done += static_cast<std::size_t>(n);
    }
    size_ += bytes.size();
  }

  std::size_t read(std::uint64_t offset, char* out, std::size_t len) const {
    std::size_t done = 0;
    while (done < len) {
      auto n = ::pread(fd_, out + done, len - done, static_cast<off_t>(offset + done));
      if (n < 0) {
        if (errno == EINTR) continue;
        throw std::system_error(errno, std::generic_category(), "spill read failed");
      }
      if (n == 0) break;
      done += static_cast<std::size_t>(n);
    }
    return done;
  }

  std::uint64_t size() const { return size_; }

 private:
  int fd_ = -1;
  std::uint64_t size_ = 0;
};

void put_u32(std::string& out, std::uint32_t v) {
  char b[4];
  std::memcpy(b, &v, 4);
  out.append(b, 4);
}

void put_str(std::string& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out += s;
}

void encode_row(const Row& row, std::string& out) {
  std::string payload;
  for (const auto& cell : row) {
    if (!cell) {
      payload.push_back(0);
      continue;
    }
    switch (cell->kind()) {
      case rdf::TermKind::Iri:
        payload.push_back(1);
        put_str(payload, cell->value());
        break;
      case rdf::TermKind::BlankNode:
        payload.push_back(2);
        put_str(payload, cell->value());
        break;
      case rdf::TermKind::Literal:
        payload.push_back(3);
        put_str(payload, cell->value());
        put_str(payload, cell->datatype());
        put_str(payload, cell->language());
        break;
    }
  }
  put_u32(out, static_cast<std::uint32_t>(payload.size()));
  out += payload;
}

struct Cursor {
  const char* p;
  std::uint32_t u32() {
    std::uint32_t v;
    std::memcpy(&v, p, 4);
    p += 4;
    return v;
  }
  std::string str() {
    auto n = u32();
    std::string s(p, n);
    p += n;
    return s;
  }
};

Row decode_row(const char* data, std::size_t columns) {
  Row row(columns);
  Cursor c{data};
  for (std::size_t i = 0; i < columns; ++i) {
    char tag = *c.p++;
    switch (tag) {
      case 1: row[i] = Term::iri(c.str()); break;
      case 2: row[i] = Term::blank(c.str()); break;
      case 3: {
        auto value = c.str();
        auto datatype = c.str();
        auto language = c.str();
        row[i] = language.empty() ? Term::literal(std::move(value), std::move(datatype))
                                  : Term::lang_literal(std::move(value), std::move(language));
        break;
      }
      default: break;
    }
  }
  return row;
}

constexpr std::size_t kFlushBytes = 1 << 20;

}  // namespace

struct SolutionSequence::Storage {
  std::vector<std::string> variables;
  std::vector<Row> rows;
  std::unique_ptr<SpillFile> spill;
  std::size_t count = 0;
};

SolutionSequence::SolutionSequence() : SolutionSequence(std::vector<std::string>{}) {}

SolutionSequence::SolutionSequence(std::vector<std::string> variables, std::vector<Row> rows) {
  auto s = std::make_shared<Storage>();
  for (auto& row : rows) row.resize(variables.size());
  s->variables = std::move(variables);
  s->count = rows.size();
  s->rows = std::move(rows);
  storage_ = std::move(s);
}

SolutionSequence::SolutionSequence(std::shared_ptr<const Storage> storage) : storage_(std::move(storage)) {}

SolutionSequence SolutionSequence::from_mappings(std::vector<std::string> variables,
                                                 const std::vector<SolutionMapping>& mappings) {
  std::vector<Row> rows;
  rows.reserve(mappings.size());
  for (const auto& m : mappings) {
    Row row(variables.size());
    for (std::size_t i = 0; i < variables.size(); ++i) {
      auto it = m.find(variables[i]);
      if (it != m.end()) row[i] = it->second;
    }
    rows.push_back(std::move(row));
  }
  return SolutionSequence(std::move(variables), std::move(rows));
}

const std::vector<std::string>& SolutionSequence::variables() const { return storage_->variables; }

std::optional<std::size_t> SolutionSequence::column(std::string_view variable) const {
  const auto& vars = storage_->variables;
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == variable) return i;
  return std::nullopt;
}

std::size_t SolutionSequence::size() const { return storage_->count; }

bool SolutionSequence::is_spilled() const { return storage_->spill != nullptr; }

void SolutionSequence::for_each_row(const std::function<void(const Row&)>& visit) const {
  const auto& s = *storage_;
  if (!s.spill) {
    for (const auto& row : s.rows) visit(row);
    return;
  }
  std::vector<char> buf;
  std::uint64_t offset = 0;
  for (std::size_t i = 0; i < s.count; ++i) {
    char head[4];
    if (s.spill->read(offset, head, 4) != 4) throw std::runtime_error("spill file truncated");
    std::uint32_t len;
    std::memcpy(&len, head, 4);
    buf.resize(len);
    if (s.spill->read(offset + 4, buf.data(), len) != len) throw std::runtime_error("spill file truncated");
    offset += 4 + len;
    visit(decode_row(buf.data(), s.variables.size()));
  }
}

std::vector<Row> SolutionSequence::rows() const {
  if (!storage_->spill) return storage_->rows;
  std::vector<Row> out;
  out.reserve(size());
  for_each_row([&](const Row& r) { out.push_back(r); });
  return out;
}

std::vector<SolutionMapping> SolutionSequence::mappings() const {
  std::vector<SolutionMapping> out;
  out.reserve(size());
  const auto& vars = variables();
  for_each_row([&](const Row& r) {
    SolutionMapping m;
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (r[i]) m.emplace(vars[i], *r[i]);
    out.push_back(std::move(m));
  });
  return out;
}

MappingKey SolutionSequence::key_of(const Row& row) const {
  const auto& vars = variables();
  MappingKey key;
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (row[i]) key.emplace_back(vars[i], *row[i]);
  std::sort(key.begin(), key.end());
  return key;
}

struct SequenceBuilder::State {
  std::vector<std::string> variables;
  SpillPolicy policy;
  std::vector<Row> rows;
  std::unique_ptr<SpillFile> spill;
  std::string pending;
  std::size_t count = 0;

  void flush() {
    if (!pending.empty()) {
      spill->append(pending);
      pending.clear();
    }
  }
};

SequenceBuilder::SequenceBuilder(std::vector<std::string> variables, SpillPolicy policy)
    : state_(std::make_unique<State>()) {
  state_->variables = std::move(variables);
  state_->policy = std::move(policy);
}

SequenceBuilder::~SequenceBuilder() = default;
SequenceBuilder::SequenceBuilder(SequenceBuilder&&) noexcept = default;
SequenceBuilder& SequenceBuilder::operator=(SequenceBuilder&&) noexcept = default;

const std::vector<std::string>& SequenceBuilder::variables() const { return state_->variables; }

std::size_t SequenceBuilder::size() const { return state_->count; }

void SequenceBuilder::add(Row row) {
  auto& s = *state_;
  row.resize(s.variables.size());
  ++s.count;
  if (!s.spill) {
    s.rows.push_back(std::move(row));
    if (s.policy.max_in_memory_rows == 0 || s.rows.size() <= s.policy.max_in_memory_rows) return;
    s.spill = std::make_unique<SpillFile>(s.policy.directory);
    for (const auto& r : s.rows) {
      encode_row(r, s.pending);
      if (s.pending.size() >= kFlushBytes) s.flush();
    }
    s.rows.clear();
    s.rows.shrink_to_fit();
    return;
  }
  encode_row(row, s.pending);
  if (s.pending.size() >= kFlushBytes) s.flush();
}

SolutionSequence SequenceBuilder::build() && {
  auto& s = *state_;
  auto storage = std::make_shared<SolutionSequence::Storage>();
  storage->variables = std::move(s.variables);
  storage->count = s.count;
  if (s.spill) {
    s.flush();
    storage->spill = std::move(s.spill);
  } else {
    storage->rows = std::move(s.rows);
  }
  return SolutionSequence(std::shared_ptr<const SolutionSequence::Storage>(std::move(storage)));
}

std::set<MappingKey> distinct_mappings(const SolutionSequence& seq) {
  std::set<MappingKey> out;
  seq.for_each_row([&](const Row& r) { out.insert(seq.key_of(r)); });
  return out;
}

bool sequences_equal_as_sets(const SolutionSequence& a, const SolutionSequence& b) {
  return distinct_mappings(a) == distinct_mappings(b);
}

bool sequences_equal_as_multisets(const SolutionSequence& a, const SolutionSequence& b) {
  if (a.size() != b.size()) return false;
  std::vector<MappingKey> ka, kb;
  ka.reserve(a.size());
  kb.reserve(b.size());
  a.for_each_row([&](const Row& r) { ka.push_back(a.key_of(r)); });
  b.for_each_row([&](const Row& r) { kb.push_back(b.key_of(r)); });
  std::sort(ka.begin(), ka.end());
  std::sort(kb.begin(), kb.end());
  return ka == kb;
}

std::string serialize_values_block(const SolutionSequence& seq) {
  const auto& vars = seq.variables();
  std::string out = "VALUES (";
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) out += ' ';
    out += '?';
    out += vars[i];
  }
  out += ") {";
  seq.for_each_row([&](const Row& r) {
    out += " (";
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (i) out += ' ';
      if (!r[i]) {
        out += "UNDEF";
      } else if (r[i]->is_blank()) {
        throw BlankNodeNotRepresentable(vars[i]);
      } else {
        out += rdf::to_sparql(*r[i]);
      }
    }
    out += ')';
  });
  out += " }";
  return out;
}

const SolutionSequence& Environment::at(const std::string& name) const {
  auto it = values_.find(name);
  if (it == values_.end()) throw UnassignedVariable(name);
  return it->second;
}

void Environment::assign(const std::string& name, SolutionSequence value) { values_[name] = std::move(value); }

std::vector<std::string> Environment::names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_) out.push_back(k);
  return out;
}

}  // namespace sparqal
