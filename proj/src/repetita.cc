#include "toca/repetita.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "toca/errors.h"

namespace toca {

namespace {

struct Line {
  int number = 0;
  std::vector<std::string> tokens;
};

class LineReader {
 public:
  explicit LineReader(std::string_view text) {
    int number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      ++number;
      std::string_view raw = text.substr(pos, end - pos);
      Line line{number, {}};
      std::istringstream in{std::string(raw)};
      for (std::string tok; in >> tok;) line.tokens.push_back(tok);
      if (!line.tokens.empty()) lines_.push_back(std::move(line));
      if (end == text.size()) break;
      pos = end + 1;
    }
  }

  bool done() const { return next_ >= lines_.size(); }
  int last_line() const { return lines_.empty() ? 1 : lines_.back().number; }

  const Line& next(const char* expecting) {
    if (done()) {
      throw ParseError(std::string("unexpected end of file, expected ") + expecting,
                       last_line() + 1);
    }
    return lines_[next_++];
  }

 private:
  std::vector<Line> lines_;
  std::size_t next_ = 0;
};

long long parse_int(const std::string& tok, int line, const char* what) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(std::string("bad ") + what + " '" + tok + "'", line);
  }
  return v;
}

double parse_double(const std::string& tok, int line, const char* what) {
  try {
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string("bad ") + what + " '" + tok + "'", line);
  }
}

Rational parse_value(const std::string& tok, int line, const char* what) {
  try {
    return parse_rational(tok);
  } catch (const std::invalid_argument&) {
    // Fall back to the exact value of a floating-point literal like 1e6.
    return exact_rational(parse_double(tok, line, what));
  }
}

int parse_section(LineReader& reader, const char* keyword) {
  const Line& l = reader.next(keyword);
  if (l.tokens.size() != 2 || l.tokens[0] != keyword) {
    throw ParseError(std::string("expected '") + keyword + " <count>'", l.number);
  }
  long long count = parse_int(l.tokens[1], l.number, "count");
  if (count < 0) throw ParseError("negative count", l.number);
  return static_cast<int>(count);
}

void parse_header(LineReader& reader, std::size_t columns) {
  const Line& l = reader.next("column header");
  if (l.tokens.empty() || l.tokens[0] != "label" || l.tokens.size() != columns) {
    throw ParseError("expected column header starting with 'label' (" +
                         std::to_string(columns) + " columns)",
                     l.number);
  }
}

}  // namespace

Topology parse_topology(std::string_view text, int connections, std::string name) {
  if (connections < 1) throw UsageError("connections must be >= 1");
  LineReader reader(text);

  const int n = parse_section(reader, "NODES");
  parse_header(reader, 3);
  std::vector<Node> nodes;
  nodes.reserve(n);
  for (int i = 0; i < n; ++i) {
    const Line& l = reader.next("node line");
    if (l.tokens.size() != 3) throw ParseError("node line needs 'label x y'", l.number);
    nodes.push_back(Node{i, l.tokens[0], parse_double(l.tokens[1], l.number, "x"),
                         parse_double(l.tokens[2], l.number, "y")});
  }

  const int m = parse_section(reader, "EDGES");
  parse_header(reader, 6);

  struct DirectedLine {
    int line;
    NodeId src, dest;
    std::int64_t weight;
    Rational bw;
  };
  std::vector<DirectedLine> directed;
  std::map<std::pair<NodeId, NodeId>, std::size_t> index;
  for (int i = 0; i < m; ++i) {
    const Line& l = reader.next("edge line");
    if (l.tokens.size() != 6) {
      throw ParseError("edge line needs 'label src dest weight bw delay'", l.number);
    }
    long long src = parse_int(l.tokens[1], l.number, "src");
    long long dest = parse_int(l.tokens[2], l.number, "dest");
    long long weight = parse_int(l.tokens[3], l.number, "weight");
    Rational bw = parse_value(l.tokens[4], l.number, "bw");
    parse_double(l.tokens[5], l.number, "delay");
    if (src < 0 || src >= n || dest < 0 || dest >= n) {
      throw ParseError("node index out of range", l.number);
    }
    if (weight < 0) throw ParseError("negative weight", l.number);
    if (bw <= 0) throw ParseError("non-positive bandwidth", l.number);
    if (src == dest) {
      throw ModelError("line " + std::to_string(l.number) + ": self-loop at node " +
                       std::to_string(src));
    }
    auto key = std::make_pair(static_cast<NodeId>(src), static_cast<NodeId>(dest));
    if (index.count(key)) {
      throw ModelError("line " + std::to_string(l.number) + ": duplicate arc " +
                       std::to_string(src) + "->" + std::to_string(dest));
    }
    index[key] = directed.size();
    directed.push_back({l.number, key.first, key.second, weight, bw});
  }
  if (!reader.done()) {
    throw ParseError("unexpected content after EDGES section", reader.next("").number);
  }

  std::vector<BidirectedEdge> edges;
  for (const auto& d : directed) {
    auto rev = index.find({d.dest, d.src});
    if (rev == index.end()) {
      throw ModelError("line " + std::to_string(d.line) + ": arc " +
                       std::to_string(d.src) + "->" + std::to_string(d.dest) +
                       " has no reverse arc");
    }
    const DirectedLine& r = directed[rev->second];
    if (r.bw != d.bw) {
      throw ModelError("line " + std::to_string(d.line) + ": asymmetric bandwidth " +
                       to_string(d.bw) + " vs " + to_string(r.bw) + " on " +
                       std::to_string(d.src) + "-" + std::to_string(d.dest));
    }
    if (d.src > d.dest) continue;  // emitted with its twin
    BidirectedEdge e;
    e.u = d.src;
    e.v = d.dest;
    e.capacity = d.bw;
    e.weight = d.weight;
    e.reverse_weight = r.weight;
    e.connections = connections;
    edges.push_back(std::move(e));
  }
  // Keep file order of the first line of each pair.
  std::stable_sort(edges.begin(), edges.end(), [&](const auto& a, const auto& b) {
    auto first = [&](const BidirectedEdge& e) {
      return std::min(directed[index.at({e.u, e.v})].line,
                      directed[index.at({e.v, e.u})].line);
    };
    return first(a) < first(b);
  });
  return Topology::create(std::move(name), std::move(nodes), std::move(edges));
}

TrafficMatrix parse_demands(std::string_view text, int node_count) {
  LineReader reader(text);
  const int k = parse_section(reader, "DEMANDS");
  TrafficMatrix t(node_count);
  if (k > 0 || !reader.done()) parse_header(reader, 4);
  for (int i = 0; i < k; ++i) {
    const Line& l = reader.next("demand line");
    if (l.tokens.size() != 4) {
      throw ParseError("demand line needs 'label src dest bw'", l.number);
    }
    long long src = parse_int(l.tokens[1], l.number, "src");
    long long dest = parse_int(l.tokens[2], l.number, "dest");
    if (src < 0 || src >= node_count || dest < 0 || dest >= node_count) {
      throw ParseError("node index out of range", l.number);
    }
    Rational bw = parse_value(l.tokens[3], l.number, "bw");
    if (bw < 0) throw ParseError("negative demand", l.number);
    if (src == dest) {
      if (bw == 0) continue;
      throw ParseError("demand from a node to itself", l.number);
    }
    t.add(static_cast<NodeId>(src), static_cast<NodeId>(dest), bw);
  }
  if (!reader.done()) {
    throw ParseError("more demand lines than declared", reader.next("").number);
  }
  return t;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Topology load_topology(const std::filesystem::path& path, int connections) {
  return parse_topology(read_file(path), connections, path.stem().string());
}

TrafficMatrix load_demands(const std::filesystem::path& path, int node_count) {
  return parse_demands(read_file(path), node_count);
}

std::string format_activation(const Topology& topo, const ActivationSolution& act) {
  act.check_against(topo);
  std::vector<const BidirectedEdge*> order;
  for (const auto& e : topo.edges()) order.push_back(&e);
  std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    return std::tie(a->u, a->v) < std::tie(b->u, b->v);
  });
  std::ostringstream out;
  for (const auto* e : order) out << e->u << ' ' << e->v << ' ' << act[e->id] << '\n';
  return out.str();
}

ActivationSolution parse_activation(std::string_view text, const Topology& topo) {
  LineReader reader(text);
  std::vector<int> x(topo.edge_count(), -1);
  while (!reader.done()) {
    const Line& l = reader.next("activation line");
    if (l.tokens.size() != 3) throw ParseError("activation line needs 'u v x'", l.number);
    long long u = parse_int(l.tokens[0], l.number, "u");
    long long v = parse_int(l.tokens[1], l.number, "v");
    long long val = parse_int(l.tokens[2], l.number, "x");
    auto e = topo.find_edge(static_cast<NodeId>(u), static_cast<NodeId>(v));
    if (!e) throw ParseError("no edge " + l.tokens[0] + "-" + l.tokens[1], l.number);
    if (x[*e] >= 0) throw ParseError("edge listed twice", l.number);
    x[*e] = static_cast<int>(val);
  }
  for (const auto& e : topo.edges()) {
    if (x[e.id] < 0) {
      throw ParseError("activation misses edge " + std::to_string(e.u) + "-" +
                       std::to_string(e.v));
    }
  }
  ActivationSolution act(std::move(x));
  act.check_against(topo);
  return act;
}

std::string format_topology(const Topology& topo) {
  std::ostringstream out;
  out << "NODES " << topo.node_count() << "\nlabel x y\n";
  for (const auto& n : topo.nodes()) out << n.label << ' ' << n.x << ' ' << n.y << '\n';
  out << "\nEDGES " << topo.arc_count() << "\nlabel src dest weight bw delay\n";
  for (ArcId a = 0; a < topo.arc_count(); ++a) {
    Arc arc = topo.arc(a);
    out << "edge_" << a << ' ' << arc.tail << ' ' << arc.head << ' ' << arc.weight
        << ' ' << to_string(topo.arc_capacity(a)) << " 1\n";
  }
  return out.str();
}

std::string format_demands(const TrafficMatrix& t) {
  std::ostringstream out;
  out << "DEMANDS " << t.support_size() << "\nlabel src dest bw\n";
  int i = 0;
  for (const auto& [pair, v] : t.entries()) {
    out << "demand_" << i++ << ' ' << pair.first << ' ' << pair.second << ' '
        << to_string(v) << '\n';
  }
  return out.str();
}

}  // namespace toca
