#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "oversmooth/graph.hpp"
#include "oversmooth/measures.hpp"
#include "oversmooth/train.hpp"

namespace oversmooth {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what);
  std::size_t line;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LoadedGraph {
  Graph graph;
  // ids[k] is the token naming node k in the file.
  std::vector<std::string> ids;
  // True when the file used 0-based integer ids kept as-is.
  bool integer_ids = true;
  std::string source;

  NodeId lookup(const std::string& token) const;
  std::map<std::string, NodeId> index;
};

// Edge list: "u v" per line, '#' comments, optional "nodes: K" header. If every
// token is a non-negative integer ids are kept; otherwise tokens are remapped in
// first-seen order.
LoadedGraph parse_graph(std::istream& in, const std::string& source = "<input>");
LoadedGraph load_graph(const std::string& path);

enum class Split { none, train, val, test };

struct LabelSet {
  std::vector<int> labels;  // -1 for unlabeled nodes
  std::vector<std::string> classes;
  std::vector<Split> split;
  bool has_splits = false;

  Masks masks() const;
};

// "node class [train|val|test]" per line. Integer class ids are ranked
// numerically, other class tokens in first-seen order.
LabelSet parse_labels(std::istream& in, const LoadedGraph& g, const std::string& source = "<input>");
LabelSet load_labels(const std::string& path, const LoadedGraph& g);

// "node train|val|test" per line; replaces any split column of the label file.
void parse_splits(std::istream& in, const LoadedGraph& g, LabelSet& labels, const std::string& source = "<input>");
void load_splits(const std::string& path, const LoadedGraph& g, LabelSet& labels);

// "node f1 f2 ..." per line; every node needs a row of the same width.
Matrix parse_features(std::istream& in, const LoadedGraph& g, const std::string& source = "<input>");
Matrix load_features(const std::string& path, const LoadedGraph& g);

using Metadata = std::vector<std::pair<std::string, std::string>>;

// CSV "index,measure,value,run_id", rows sorted by (run_id, measure, index),
// metadata as leading "# key: value" lines.
std::string format_series(const std::vector<MeasureSeries>& series, const Metadata& meta = {});
void write_series(const std::vector<MeasureSeries>& series, const std::string& path, const Metadata& meta = {});
// Groups rows by (run_id, measure) in file order.
std::vector<MeasureSeries> parse_series(std::istream& in, const std::string& source = "<input>");
std::vector<MeasureSeries> read_series(const std::string& path);

void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

}  // namespace oversmooth
