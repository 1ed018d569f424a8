// Copyright 2026 The netcv Authors.
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

// Edge-list and GML readers, edge-list writer.

#pragma once

#include <cctype>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "netcv/error.hpp"
#include "netcv/graph.hpp"

namespace netcv {

enum class GraphFormat { EdgeList, Gml };

inline GraphFormat parse_format(const std::string& s) {
  if (s == "edgelist" || s == "edges" || s == "txt") return GraphFormat::EdgeList;
  if (s == "gml") return GraphFormat::Gml;
  throw InvalidParameter("unknown graph format: " + s);
}

// Format implied by the file extension; edge list unless it ends in .gml.
inline GraphFormat guess_format(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot != std::string::npos) {
    std::string ext = path.substr(dot + 1);
    for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (ext == "gml") return GraphFormat::Gml;
  }
  return GraphFormat::EdgeList;
}

struct LoadedGraph {
  Graph graph;
  std::vector<std::string> node_ids;  // original id of node i
  std::optional<std::vector<std::string>> labels;
  std::optional<std::vector<std::string>> values;
  std::vector<std::string> warnings;
};

namespace detail {

class NodeIndex {
 public:
  int intern(const std::string& id) {
    const auto [it, inserted] = index_.emplace(id, static_cast<int>(ids_.size()));
    if (inserted) ids_.push_back(id);
    return it->second;
  }
  std::optional<int> find(const std::string& id) const {
    const auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  int size() const { return static_cast<int>(ids_.size()); }
  std::vector<std::string> take() { return std::move(ids_); }

 private:
  std::unordered_map<std::string, int> index_;
  std::vector<std::string> ids_;
};

inline Graph assemble(int n, const std::vector<std::pair<int, int>>& raw, std::vector<std::string>& warnings) {
  std::set<std::pair<int, int>> edges;
  int loops = 0;
  for (auto [u, v] : raw) {
    if (u == v) {
      ++loops;
      continue;
    }
    edges.emplace(std::min(u, v), std::max(u, v));
  }
  if (loops > 0) warnings.push_back("dropped " + std::to_string(loops) + " self-loop(s)");
  return Graph::from_edges(n, std::vector<std::pair<int, int>>(edges.begin(), edges.end()));
}

}  // namespace detail

// Whitespace-separated "u v" pairs, one per line; '#' starts a comment.
// Node ids are compacted to 0..n-1 in order of first appearance.
inline LoadedGraph parse_edgelist(std::istream& in) {
  detail::NodeIndex index;
  std::vector<std::pair<int, int>> raw;
  LoadedGraph out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() != 2) throw FormatError("expected two node ids per line", line_no);
    const int u = index.intern(tok[0]);
    const int v = index.intern(tok[1]);
    raw.emplace_back(u, v);
  }
  out.graph = detail::assemble(index.size(), raw, out.warnings);
  out.node_ids = index.take();
  return out;
}

namespace detail {

struct GmlToken {
  enum Kind { Key, Number, String, Open, Close } kind;
  std::string text;
  int line;
};

inline std::vector<GmlToken> gml_tokens(std::istream& in) {
  std::vector<GmlToken> out;
  std::string line;
  int line_no = 0;
  bool in_string = false;
  std::string buf;
  int string_line = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t i = 0;
    if (in_string) buf.push_back('\n');
    while (i < line.size()) {
      const char c = line[i];
      if (in_string) {
        if (c == '"') {
          out.push_back({GmlToken::String, buf, string_line});
          buf.clear();
          in_string = false;
        } else {
          buf.push_back(c);
        }
        ++i;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (c == '#') {
        break;
      } else if (c == '"') {
        in_string = true;
        string_line = line_no;
        ++i;
      } else if (c == '[') {
        out.push_back({GmlToken::Open, "[", line_no});
        ++i;
      } else if (c == ']') {
        out.push_back({GmlToken::Close, "]", line_no});
        ++i;
      } else {
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != '[' &&
               line[j] != ']' && line[j] != '"')
          ++j;
        std::string word = line.substr(i, j - i);
        const bool numeric = std::isdigit(static_cast<unsigned char>(word[0])) || word[0] == '-' || word[0] == '+' ||
                             word[0] == '.';
        out.push_back({numeric ? GmlToken::Number : GmlToken::Key, std::move(word), line_no});
        i = j;
      }
    }
  }
  if (in_string) throw FormatError("unterminated string", string_line);
  return out;
}

}  // namespace detail

// GML subset: graph [ node [ id .. label .. value .. ] edge [ source .. target .. ] ].
// Other keys are skipped. Node label and value attributes are returned when
// any node carries them.
inline LoadedGraph parse_gml(std::istream& in) {
  const auto tok = detail::gml_tokens(in);
  std::size_t pos = 0;
  auto at_end = [&] { return pos >= tok.size(); };
  auto last_line = [&] { return tok.empty() ? 1 : tok.back().line; };

  // Skips one value (scalar or bracketed list) starting at pos.
  auto skip_value = [&] {
    if (at_end()) throw FormatError("missing value", last_line());
    if (tok[pos].kind == detail::GmlToken::Close) throw FormatError("unexpected ']'", tok[pos].line);
    if (tok[pos].kind != detail::GmlToken::Open) {
      ++pos;
      return;
    }
    int depth = 0;
    do {
      if (at_end()) throw FormatError("unbalanced brackets", last_line());
      if (tok[pos].kind == detail::GmlToken::Open) ++depth;
      else if (tok[pos].kind == detail::GmlToken::Close) --depth;
      ++pos;
    } while (depth > 0);
  };

  struct RawNode {
    std::string id;
    std::optional<std::string> label, value;
    int line;
  };
  struct RawEdge {
    std::string source, target;
    int line;
  };
  std::vector<RawNode> nodes;
  std::vector<RawEdge> edges;

  // Reads "key value" pairs of one bracketed record into fields.
  auto read_record = [&](auto&& on_field) {
    if (at_end() || tok[pos].kind != detail::GmlToken::Open)
      throw FormatError("expected '['", at_end() ? last_line() : tok[pos].line);
    ++pos;
    while (true) {
      if (at_end()) throw FormatError("unbalanced brackets", last_line());
      if (tok[pos].kind == detail::GmlToken::Close) {
        ++pos;
        return;
      }
      if (tok[pos].kind != detail::GmlToken::Key) throw FormatError("expected a key", tok[pos].line);
      const std::string key = tok[pos].text;
      ++pos;
      if (at_end()) throw FormatError("missing value for " + key, last_line());
      if (tok[pos].kind == detail::GmlToken::Number || tok[pos].kind == detail::GmlToken::String) {
        on_field(key, tok[pos]);
        ++pos;
      } else {
        skip_value();
      }
    }
  };

  bool saw_graph = false;
  while (!at_end()) {
    if (tok[pos].kind != detail::GmlToken::Key) throw FormatError("expected a key", tok[pos].line);
    const std::string key = tok[pos++].text;
    if (key != "graph") {
      skip_value();
      continue;
    }
    saw_graph = true;
    if (at_end() || tok[pos].kind != detail::GmlToken::Open)
      throw FormatError("expected '[' after graph", at_end() ? last_line() : tok[pos].line);
    ++pos;
    while (true) {
      if (at_end()) throw FormatError("unbalanced brackets", last_line());
      if (tok[pos].kind == detail::GmlToken::Close) {
        ++pos;
        break;
      }
      if (tok[pos].kind != detail::GmlToken::Key) throw FormatError("expected a key", tok[pos].line);
      const std::string k = tok[pos].text;
      const int line = tok[pos].line;
      ++pos;
      if (k == "node") {
        RawNode node{"", std::nullopt, std::nullopt, line};
        bool has_id = false;
        read_record([&](const std::string& f, const detail::GmlToken& t) {
          if (f == "id") {
            node.id = t.text;
            has_id = true;
          } else if (f == "label") {
            node.label = t.text;
          } else if (f == "value") {
            node.value = t.text;
          }
        });
        if (!has_id) throw FormatError("node without id", line);
        nodes.push_back(std::move(node));
      } else if (k == "edge") {
        RawEdge e{"", "", line};
        bool has_s = false, has_t = false;
        read_record([&](const std::string& f, const detail::GmlToken& t) {
          if (f == "source") {
            e.source = t.text;
            has_s = true;
          } else if (f == "target") {
            e.target = t.text;
            has_t = true;
          }
        });
        if (!has_s || !has_t) throw FormatError("edge without source or target", line);
        edges.push_back(std::move(e));
      } else {
        skip_value();
      }
    }
  }
  if (!saw_graph) throw FormatError("no graph record", last_line());

  detail::NodeIndex index;
  for (const auto& nd : nodes) {
    if (index.find(nd.id)) throw FormatError("duplicate node id " + nd.id, nd.line);
    index.intern(nd.id);
  }
  std::vector<std::pair<int, int>> raw;
  for (const auto& e : edges) {
    const auto u = index.find(e.source);
    const auto v = index.find(e.target);
    if (!u || !v) throw FormatError("edge refers to an undeclared node", e.line);
    raw.emplace_back(*u, *v);
  }

  LoadedGraph out;
  out.graph = detail::assemble(index.size(), raw, out.warnings);
  bool any_label = false, any_value = false;
  for (const auto& nd : nodes) {
    any_label = any_label || nd.label.has_value();
    any_value = any_value || nd.value.has_value();
  }
  if (any_label) {
    out.labels.emplace();
    for (const auto& nd : nodes) out.labels->push_back(nd.label.value_or(""));
  }
  if (any_value) {
    out.values.emplace();
    for (const auto& nd : nodes) out.values->push_back(nd.value.value_or(""));
  }
  out.node_ids = index.take();
  return out;
}

inline LoadedGraph load_graph(const std::string& path, GraphFormat format) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  return format == GraphFormat::Gml ? parse_gml(in) : parse_edgelist(in);
}

inline LoadedGraph load_graph(const std::string& path) { return load_graph(path, guess_format(path)); }

// One "u v" line per edge with u < v; ids are node indices unless given.
inline void write_edgelist(const Graph& g, std::ostream& out, const std::vector<std::string>* ids = nullptr) {
  if (ids && static_cast<int>(ids->size()) != g.n()) throw InvalidInput("id list has the wrong length");
  for (auto [u, v] : g.edges()) {
    if (ids) out << (*ids)[u] << ' ' << (*ids)[v] << '\n';
    else out << u << ' ' << v << '\n';
  }
}

}  // namespace netcv
