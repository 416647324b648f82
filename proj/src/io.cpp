#include "oversmooth/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace oversmooth {

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& what)
    : std::runtime_error(fmt::format("{}:{}: {}", source, line, what)), line(line) {}

NodeId LoadedGraph::lookup(const std::string& token) const {
  auto it = index.find(token);
  if (it == index.end()) throw std::out_of_range(fmt::format("node '{}' is not in the graph", token));
  return it->second;
}

namespace {

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string t; ss >> t;) out.push_back(std::move(t));
  return out;
}

// Non-blank lines with '#' comments removed, with their 1-based line numbers.
std::vector<std::pair<std::size_t, std::vector<std::string>>> content_lines(std::istream& in) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> out;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    out.emplace_back(no, tokens(line));
  }
  return out;
}

bool parse_index(const std::string& s, long long& out) {
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size() && out >= 0;
}

bool parse_double(const std::string& s, double& out) {
  std::istringstream ss(s);
  ss.imbue(std::locale::classic());
  ss >> out;
  return ss && ss.peek() == std::char_traits<char>::eof();
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}' for reading", path));
  return in;
}

Split parse_split(const std::string& s, const std::string& source, std::size_t line) {
  if (s == "train") return Split::train;
  if (s == "val" || s == "valid" || s == "validation") return Split::val;
  if (s == "test") return Split::test;
  throw ParseError(source, line, fmt::format("unknown split '{}'", s));
}

}  // namespace

LoadedGraph parse_graph(std::istream& in, const std::string& source) {
  const auto lines = content_lines(in);
  std::optional<long long> declared;
  std::vector<std::pair<std::size_t, std::pair<std::string, std::string>>> raw;
  for (const auto& [no, t] : lines) {
    if (t[0] == "nodes:" || (t[0].rfind("nodes:", 0) == 0 && t[0].size() > 6)) {
      const std::string value = t[0].size() > 6 ? t[0].substr(6) : (t.size() > 1 ? t[1] : "");
      const std::size_t expected = t[0].size() > 6 ? 1 : 2;
      long long k = 0;
      if (t.size() != expected || !parse_index(value, k) || k < 1)
        throw ParseError(source, no, "malformed header, expected 'nodes: K'");
      if (declared) throw ParseError(source, no, "duplicate 'nodes:' header");
      if (!raw.empty()) throw ParseError(source, no, "'nodes:' header must precede the edges");
      declared = k;
      continue;
    }
    if (t.size() != 2) throw ParseError(source, no, fmt::format("expected 'u v', got {} fields", t.size()));
    raw.push_back({no, {t[0], t[1]}});
  }

  struct {
    std::vector<std::string> ids;
    std::map<std::string, NodeId> index;
    bool integer_ids = true;
  } out;
  long long tmp = 0;
  out.integer_ids = std::all_of(raw.begin(), raw.end(), [&](const auto& r) {
    return parse_index(r.second.first, tmp) && parse_index(r.second.second, tmp);
  });

  std::vector<Edge> edges;
  edges.reserve(raw.size());
  auto self_check = [&](std::size_t no, NodeId a, NodeId b) {
    if (a == b) throw ParseError(source, no, fmt::format("self-edge on node '{}'", out.ids.empty() ? "" : out.ids[a]));
  };
  if (out.integer_ids) {
    long long top = -1;
    for (const auto& [no, uv] : raw) {
      long long a = 0, b = 0;
      parse_index(uv.first, a);
      parse_index(uv.second, b);
      if (std::max(a, b) >= std::numeric_limits<NodeId>::max()) throw ParseError(source, no, "node id too large");
      top = std::max({top, a, b});
    }
    if (declared && *declared <= top)
      throw ParseError(source, 1, fmt::format("header declares {} nodes but id {} appears", *declared, top));
    const long long v = declared ? *declared : top + 1;
    if (v < 1) throw ParseError(source, 1, "graph has no nodes");
    out.ids.resize(static_cast<std::size_t>(v));
    for (long long k = 0; k < v; ++k) {
      out.ids[static_cast<std::size_t>(k)] = std::to_string(k);
      out.index[out.ids[static_cast<std::size_t>(k)]] = static_cast<NodeId>(k);
    }
    for (const auto& [no, uv] : raw) {
      long long a = 0, b = 0;
      parse_index(uv.first, a);
      parse_index(uv.second, b);
      self_check(no, static_cast<NodeId>(a), static_cast<NodeId>(b));
      edges.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
    }
  } else {
    auto intern = [&](const std::string& tok) {
      auto [it, fresh] = out.index.try_emplace(tok, static_cast<NodeId>(out.ids.size()));
      if (fresh) out.ids.push_back(tok);
      return it->second;
    };
    for (const auto& [no, uv] : raw) {
      const NodeId a = intern(uv.first);
      const NodeId b = intern(uv.second);
      self_check(no, a, b);
      edges.emplace_back(a, b);
    }
    if (declared) {
      if (static_cast<std::size_t>(*declared) < out.ids.size())
        throw ParseError(source, 1,
                         fmt::format("header declares {} nodes but {} distinct ids appear", *declared, out.ids.size()));
      while (out.ids.size() < static_cast<std::size_t>(*declared)) intern(fmt::format("#{}", out.ids.size()));
    }
    if (out.ids.empty()) throw ParseError(source, 1, "graph has no nodes");
  }
  Graph g = Graph::from_edges(edges, out.ids.size());
  return LoadedGraph{std::move(g), std::move(out.ids), out.integer_ids, source, std::move(out.index)};
}

LoadedGraph load_graph(const std::string& path) {
  auto in = open_in(path);
  return parse_graph(in, path);
}

Masks LabelSet::masks() const {
  Masks m;
  for (std::size_t i = 0; i < split.size(); ++i) {
    if (labels[i] < 0) continue;
    switch (split[i]) {
      case Split::train: m.train.push_back(i); break;
      case Split::val: m.val.push_back(i); break;
      case Split::test: m.test.push_back(i); break;
      case Split::none: break;
    }
  }
  return m;
}

LabelSet parse_labels(std::istream& in, const LoadedGraph& g, const std::string& source) {
  const std::size_t v = g.graph.node_count();
  LabelSet out;
  out.labels.assign(v, -1);
  out.split.assign(v, Split::none);
  std::vector<std::pair<NodeId, std::string>> assigned;
  std::vector<bool> seen(v, false);
  std::optional<bool> with_split;
  for (const auto& [no, t] : content_lines(in)) {
    if (t.size() != 2 && t.size() != 3) throw ParseError(source, no, "expected 'node class [split]'");
    if (with_split && *with_split != (t.size() == 3))
      throw ParseError(source, no, "split column must be present on every line or none");
    with_split = t.size() == 3;
    NodeId id = 0;
    try {
      id = g.lookup(t[0]);
    } catch (const std::out_of_range& e) {
      throw ParseError(source, no, e.what());
    }
    if (seen[id]) throw ParseError(source, no, fmt::format("node '{}' labeled twice", t[0]));
    seen[id] = true;
    assigned.emplace_back(id, t[1]);
    if (t.size() == 3) out.split[id] = parse_split(t[2], source, no);
  }
  out.has_splits = with_split.value_or(false);

  long long tmp = 0;
  const bool numeric = std::all_of(assigned.begin(), assigned.end(), [&](const auto& a) {
    return parse_index(a.second, tmp);
  });
  if (numeric) {
    std::set<long long> distinct;
    for (const auto& a : assigned) {
      parse_index(a.second, tmp);
      distinct.insert(tmp);
    }
    for (long long c : distinct) out.classes.push_back(std::to_string(c));
  } else {
    for (const auto& a : assigned)
      if (std::find(out.classes.begin(), out.classes.end(), a.second) == out.classes.end())
        out.classes.push_back(a.second);
  }
  std::map<std::string, int> rank;
  for (std::size_t k = 0; k < out.classes.size(); ++k) rank[out.classes[k]] = static_cast<int>(k);
  for (const auto& [id, cls] : assigned) {
    std::string key = cls;
    if (numeric) {
      parse_index(cls, tmp);
      key = std::to_string(tmp);
    }
    out.labels[id] = rank.at(key);
  }
  return out;
}

LabelSet load_labels(const std::string& path, const LoadedGraph& g) {
  auto in = open_in(path);
  return parse_labels(in, g, path);
}

void parse_splits(std::istream& in, const LoadedGraph& g, LabelSet& labels, const std::string& source) {
  std::vector<Split> split(g.graph.node_count(), Split::none);
  std::vector<bool> seen(split.size(), false);
  for (const auto& [no, t] : content_lines(in)) {
    if (t.size() != 2) throw ParseError(source, no, "expected 'node split'");
    NodeId id = 0;
    try {
      id = g.lookup(t[0]);
    } catch (const std::out_of_range& e) {
      throw ParseError(source, no, e.what());
    }
    if (seen[id]) throw ParseError(source, no, fmt::format("node '{}' assigned twice", t[0]));
    seen[id] = true;
    split[id] = parse_split(t[1], source, no);
  }
  labels.split = std::move(split);
  labels.has_splits = true;
}

void load_splits(const std::string& path, const LoadedGraph& g, LabelSet& labels) {
  auto in = open_in(path);
  parse_splits(in, g, labels, path);
}

Matrix parse_features(std::istream& in, const LoadedGraph& g, const std::string& source) {
  const std::size_t v = g.graph.node_count();
  std::vector<std::vector<double>> rows(v);
  std::optional<std::size_t> width;
  for (const auto& [no, t] : content_lines(in)) {
    if (t.size() < 2) throw ParseError(source, no, "expected 'node f1 f2 ...'");
    if (width && *width != t.size() - 1)
      throw ParseError(source, no, fmt::format("expected {} features, got {}", *width, t.size() - 1));
    width = t.size() - 1;
    NodeId id = 0;
    try {
      id = g.lookup(t[0]);
    } catch (const std::out_of_range& e) {
      throw ParseError(source, no, e.what());
    }
    if (!rows[id].empty()) throw ParseError(source, no, fmt::format("node '{}' listed twice", t[0]));
    for (std::size_t k = 1; k < t.size(); ++k) {
      double x = 0.0;
      if (!parse_double(t[k], x) || !std::isfinite(x))
        throw ParseError(source, no, fmt::format("bad feature value '{}'", t[k]));
      rows[id].push_back(x);
    }
  }
  if (!width) throw ParseError(source, 1, "no feature rows");
  Matrix x(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(*width));
  for (std::size_t i = 0; i < v; ++i) {
    if (rows[i].empty()) throw ParseError(source, 1, fmt::format("node '{}' has no features", g.ids[i]));
    for (std::size_t k = 0; k < *width; ++k) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
  }
  return x;
}

Matrix load_features(const std::string& path, const LoadedGraph& g) {
  auto in = open_in(path);
  return parse_features(in, g, path);
}

std::string format_series(const std::vector<MeasureSeries>& series, const Metadata& meta) {
  struct Row {
    const std::string* run;
    const std::string* measure;
    double index;
    double value;
  };
  std::vector<Row> rows;
  for (const auto& s : series) {
    check_series(s);
    for (const auto* field : {&s.run_id, &s.measure})
      if (field->find_first_of(",\n\r\"") != std::string::npos)
        throw std::invalid_argument(fmt::format("'{}' cannot be written to CSV", *field));
    for (std::size_t k = 0; k < s.size(); ++k) rows.push_back({&s.run_id, &s.measure, s.index[k], s.values[k]});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (*a.run != *b.run) return *a.run < *b.run;
    if (*a.measure != *b.measure) return *a.measure < *b.measure;
    return a.index < b.index;
  });
  std::string out;
  for (const auto& [k, v] : meta) out += fmt::format("# {}: {}\n", k, v);
  out += "index,measure,value,run_id\n";
  for (const auto& r : rows) out += fmt::format("{},{},{:.17g},{}\n", r.index, *r.measure, r.value, *r.run);
  return out;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path));
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError(fmt::format("failed writing '{}'", path));
}

std::string read_text(const std::string& path) {
  auto in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_series(const std::vector<MeasureSeries>& series, const std::string& path, const Metadata& meta) {
  write_text(path, format_series(series, meta));
}

std::vector<MeasureSeries> parse_series(std::istream& in, const std::string& source) {
  std::vector<MeasureSeries> out;
  std::map<std::pair<std::string, std::string>, std::size_t> slot;
  std::string line;
  bool header = false;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "index,measure,value,run_id")
        throw ParseError(source, no, "expected header 'index,measure,value,run_id'");
      header = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 4) throw ParseError(source, no, fmt::format("expected 4 fields, got {}", f.size()));
    double index = 0.0, value = 0.0;
    if (!parse_double(f[0], index)) throw ParseError(source, no, fmt::format("bad index '{}'", f[0]));
    if (!parse_double(f[2], value)) throw ParseError(source, no, fmt::format("bad value '{}'", f[2]));
    auto key = std::make_pair(f[3], f[1]);
    auto it = slot.find(key);
    if (it == slot.end()) {
      it = slot.emplace(key, out.size()).first;
      out.push_back(MeasureSeries{f[1], f[3], {}, {}});
    }
    out[it->second].push(index, value);
  }
  if (!header) throw ParseError(source, 1, "missing CSV header");
  return out;
}

std::vector<MeasureSeries> read_series(const std::string& path) {
  auto in = open_in(path);
  return parse_series(in, path);
}

}  // namespace oversmooth
