#include "lich/field_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "lich/error.hpp"

namespace lich {

void write_field(std::ostream& out, const TensorField& f) {
  const Grid& g = f.grid();
  out << "# lich-field space=" << g.space().spec_string() << " p=" << f.order()
      << " class=" << to_string(f.symmetry()) << " res=" << g.resolution_string() << " frame=orthonormal\n";
  const std::size_t dims = g.resolution().size();
  std::vector<int> idx(dims);
  const auto v = f.values();
  const std::size_t fib = f.fiber_size();
  char buf[32];
  for (std::size_t node = 0; node < f.node_count(); ++node) {
    g.node_multi_index(node, idx);
    std::string line;
    for (std::size_t a = 0; a < dims; ++a) line += (a ? " " : "") + std::to_string(idx[a]);
    for (std::size_t i = 0; i < fib; ++i) {
      std::snprintf(buf, sizeof buf, " %.16e", v[node * fib + i]);
      line += buf;
    }
    out << line << '\n';
  }
}

void write_field(const std::string& path, const TensorField& f) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::config, "cannot open '" + path + "' for writing");
  write_field(out, f);
}

TensorField read_field(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) fail(ErrorKind::config, "field file: missing header");
  std::istringstream hs(header);
  std::string hash, magic;
  hs >> hash >> magic;
  if (hash != "#" || magic != "lich-field") fail(ErrorKind::config, "field file: bad header '" + header + "'");
  std::map<std::string, std::string> kv;
  for (std::string tok; hs >> tok;) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) fail(ErrorKind::config, "field file: bad header token '" + tok + "'");
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  for (const char* key : {"space", "p", "class", "res"})
    if (!kv.count(key)) fail(ErrorKind::config, std::string("field file: header lacks '") + key + "'");
  if (kv.count("frame") && kv["frame"] != "orthonormal")
    fail(ErrorKind::config, "field file: unsupported frame '" + kv["frame"] + "'");

  std::vector<int> res;
  {
    std::istringstream rs(kv["res"]);
    for (std::string part; std::getline(rs, part, 'x');) {
      try {
        res.push_back(std::stoi(part));
      } catch (const std::exception&) {
        fail(ErrorKind::config, "field file: bad resolution '" + kv["res"] + "'");
      }
    }
  }
  int p = 0;
  try {
    p = std::stoi(kv["p"]);
  } catch (const std::exception&) {
    fail(ErrorKind::config, "field file: bad order '" + kv["p"] + "'");
  }
  const GridPtr grid = Grid::make(ModelSpace::parse(kv["space"]), res);
  TensorField f(grid, p, parse_symmetry_class(kv["class"]));
  const std::size_t dims = grid->resolution().size();
  const std::size_t fib = f.fiber_size();
  std::vector<int> idx(dims), expect(dims);
  auto v = f.values();
  std::string line;
  for (std::size_t node = 0; node < f.node_count(); ++node) {
    if (!std::getline(in, line)) fail(ErrorKind::config, "field file: truncated at node " + std::to_string(node));
    std::istringstream ls(line);
    for (auto& i : idx) ls >> i;
    grid->node_multi_index(node, expect);
    if (!ls || idx != expect) fail(ErrorKind::config, "field file: unexpected node index at line " + std::to_string(node + 2));
    for (std::size_t i = 0; i < fib; ++i) ls >> v[node * fib + i];
    if (!ls) fail(ErrorKind::config, "field file: bad components at line " + std::to_string(node + 2));
  }
  return f;
}

TensorField read_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::config, "cannot open '" + path + "'");
  return read_field(in);
}

}  // namespace lich
