#include <set>
#include <sstream>

#include "common.hpp"
#include "sps/encodings/encodings.hpp"

namespace sps::enc {

using namespace detail;

namespace {

std::size_t table_size(std::size_t k, std::size_t n) {
  std::size_t s = 1;
  for (std::size_t i = 0; i < n; ++i) {
    s *= k;
    if (s > 1'000'000) invalid("update table is too large");
  }
  return s;
}

std::vector<int> decode_row(const std::string& row, std::size_t k) {
  std::vector<int> out;
  for (char ch : row) {
    if (ch < '0' || ch > '9' || static_cast<std::size_t>(ch - '0') >= k)
      invalid(std::string("cell value '") + ch + "' is not an alphabet index");
    out.push_back(ch - '0');
  }
  return out;
}

}  // namespace

std::vector<int> wolfram_table(unsigned number) {
  if (number > 255) invalid("elementary rule numbers are 0..255");
  std::vector<int> t(8);
  for (unsigned i = 0; i < 8; ++i) t[i] = (number >> i) & 1;
  return t;
}

std::vector<std::pair<int, int>> moore_neighborhood() {
  std::vector<std::pair<int, int>> out;
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx) out.emplace_back(dx, dy);
  return out;
}

std::vector<int> life_table(const std::string& rule) {
  std::set<int> born, survive;
  std::set<int>* cur = nullptr;
  for (char ch : rule) {
    if (ch == 'B' || ch == 'b') cur = &born;
    else if (ch == 'S' || ch == 's') cur = &survive;
    else if (ch == '/') cur = nullptr;
    else if (ch >= '0' && ch <= '8' && cur) cur->insert(ch - '0');
    else invalid("malformed life rule '" + rule + "'");
  }
  std::vector<int> t(512);
  for (int idx = 0; idx < 512; ++idx) {
    // digit i of idx (most significant first) is neighbour i; index 4 is the centre
    int live = 0, centre = 0;
    for (int i = 0; i < 9; ++i) {
      int bit = (idx >> (8 - i)) & 1;
      if (i == 4) centre = bit;
      else live += bit;
    }
    t[idx] = centre ? survive.count(live) > 0 : born.count(live) > 0;
  }
  return t;
}

CellularAutomatonDesc parse_cellular_automaton(std::string_view text) {
  json j = parse_json(text);
  CellularAutomatonDesc d;
  d.width = get_size(j, "width");
  if (has(j, "height")) d.height = get_size(j, "height");
  const auto& rule = field(j, "rule");
  if (has(rule, "wolfram")) {
    d.table = wolfram_table(static_cast<unsigned>(get_size(rule, "wolfram")));
    d.alphabet = {"v0", "v1"};
    d.neighborhood = {{-1, 0}, {0, 0}, {1, 0}};
  } else if (has(rule, "life")) {
    d.table = life_table(get_string(rule, "life"));
    d.alphabet = {"dead", "live"};
    d.neighborhood = moore_neighborhood();
  } else if (has(rule, "table")) {
    d.alphabet = get_strings(j, "alphabet");
    for (const auto& o : field(j, "neighborhood")) {
      if (!o.is_array() || o.size() != 2 || !o[0].is_number_integer() || !o[1].is_number_integer())
        invalid("neighbourhood offsets are [dx, dy] integer pairs");
      d.neighborhood.emplace_back(o[0].get<int>(), o[1].get<int>());
    }
    const std::size_t k = d.alphabet.size();
    if (k == 0 || k > 10) invalid("alphabet must have 1..10 values");
    d.table.assign(table_size(k, d.neighborhood.size()), -1);
    const auto& tab = field(rule, "table");
    if (!tab.is_object()) invalid("update table must map neighbourhood strings to values");
    for (const auto& [key, val] : tab.items()) {
      if (key.size() != d.neighborhood.size()) invalid("table key '" + key + "' has the wrong length");
      std::size_t idx = 0;
      for (int v : decode_row(key, k)) idx = idx * k + static_cast<std::size_t>(v);
      if (!val.is_string() || val.get<std::string>().size() != 1) invalid("table values are single digits");
      d.table[idx] = decode_row(val.get<std::string>(), k).front();
    }
  } else {
    invalid("rule must give 'wolfram', 'life' or 'table'");
  }
  if (has(j, "alphabet") && !has(rule, "table")) d.alphabet = get_strings(j, "alphabet");
  if (has(j, "boundary")) {
    std::string b = get_string(j, "boundary");
    if (b == "wrap") d.wrap = true;
    else if (b == "fixed") d.wrap = false;
    else invalid("boundary must be wrap or fixed");
  }
  if (has(j, "fixed_value")) d.fixed_value = static_cast<int>(get_size(j, "fixed_value"));
  if (has(j, "mode")) {
    std::string m = get_string(j, "mode");
    if (m == "sync") d.synchronous = true;
    else if (m == "async") d.synchronous = false;
    else invalid("mode must be sync or async");
  }
  if (has(j, "generations")) d.generations = get_size(j, "generations");
  for (const auto& row : get_strings(j, "initial")) d.initial.push_back(decode_row(row, d.alphabet.size()));
  validate(d);
  return d;
}

void validate(const CellularAutomatonDesc& d) {
  if (d.width == 0 || d.height == 0) invalid("grid dimensions must be positive");
  if (d.width * d.height > 4096) invalid("grid is larger than 4096 cells");
  if (d.neighborhood.empty()) invalid("neighbourhood must not be empty");
  if (d.generations == 0) invalid("generations must be at least 1");
  Names names({"Cell", "Site", "State", "Val", "Next", "Gen", "Stamp", "edge", "update", "tick"});
  for (const auto& a : d.alphabet) names.claim(a, "cell value");
  const std::size_t k = d.alphabet.size();
  if (k == 0 || k > 10) invalid("alphabet must have 1..10 values");
  if (d.table.size() != table_size(k, d.neighborhood.size()))
    invalid("update table must have one entry per neighbourhood value tuple");
  for (int v : d.table)
    if (v < 0 || static_cast<std::size_t>(v) >= k) invalid("update table is not total over neighbourhood values");
  if (d.fixed_value < 0 || static_cast<std::size_t>(d.fixed_value) >= k) invalid("fixed boundary value is not in the alphabet");
  if (d.initial.size() != d.height) invalid("initial grid must have one row per grid row");
  for (const auto& row : d.initial) {
    if (row.size() != d.width) invalid("initial rows must have one value per column");
    for (int v : row)
      if (v < 0 || static_cast<std::size_t>(v) >= k) invalid("initial value outside the alphabet");
  }
}

std::string cell_name(std::size_t row, std::size_t col) {
  return "c_" + std::to_string(row) + "_" + std::to_string(col);
}

std::size_t ca_steps(const CellularAutomatonDesc& d) {
  return d.synchronous ? d.generations : d.generations * (d.width * d.height + 1);
}

std::string emit_cellular_automaton(const CellularAutomatonDesc& d) {
  validate(d);
  const std::size_t nb = d.neighborhood.size();
  const std::size_t k = d.alphabet.size();
  std::vector<std::string> cells;
  for (std::size_t r = 0; r < d.height; ++r)
    for (std::size_t c = 0; c < d.width; ++c) cells.push_back(cell_name(r, c));
  const std::string site = d.wrap ? "Cell" : "Site";

  auto neighbour = [&](std::size_t r, std::size_t c, std::pair<int, int> off) -> std::string {
    long long rr = static_cast<long long>(r) + off.second;
    long long cc = static_cast<long long>(c) + off.first;
    const long long h = static_cast<long long>(d.height), w = static_cast<long long>(d.width);
    if (d.wrap) return cell_name(static_cast<std::size_t>(((rr % h) + h) % h), static_cast<std::size_t>(((cc % w) + w) % w));
    if (rr < 0 || rr >= h || cc < 0 || cc >= w) return "edge";
    return cell_name(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc));
  };

  std::ostringstream out;
  out << "# " << (d.synchronous ? "Synchronous" : "Asynchronous") << " cellular automaton, " << d.height
      << " x " << d.width << (d.wrap ? ", wrapped" : ", fixed boundary") << ".\n";
  out << "individual " << join(d.alphabet, ", ") << ";\n";
  out << "individual " << join(cells, ", ") << (d.wrap ? "" : ", edge") << ";\n";
  out << "concept State = {" << join(d.alphabet, ", ") << "};\n";
  out << "concept Cell = {" << join(cells, ", ") << "};\n";
  if (!d.wrap) out << "concept Site = {" << join(cells, ", ") << ", edge};\n";
  for (std::size_t i = 0; i < nb; ++i) out << "operator Nb_" << i << "(Cell) -> " << site << ";\n";
  out << "operator Val(" << site << ") -> State;\n";
  out << "operator Next(";
  for (std::size_t i = 0; i < nb; ++i) out << (i ? ", " : "") << "State";
  out << ") -> State;\n";

  std::string next = "Next(";
  for (std::size_t i = 0; i < nb; ++i) next += (i ? ", Val(Nb_" : "Val(Nb_") + std::to_string(i) + "(x))";
  next += ")";
  if (d.synchronous) {
    out << "schema update: -> Val(x) = " << next << " where x: Cell;\n";
    out << "group update;\n";
  } else {
    out << "operator Gen -> Real;\n";
    out << "operator Stamp(Cell) -> Real;\n";
    out << "schema update: Stamp(x) = Gen -> (Val(x), Stamp(x)) = (" << next << ", Gen + 1) where x: Cell;\n";
    out << "rule tick: -> Gen = Gen + 1;\n";
  }

  out << "init {\n";
  for (std::size_t r = 0; r < d.height; ++r)
    for (std::size_t c = 0; c < d.width; ++c) {
      const std::string cell = cell_name(r, c);
      out << "  Val(" << cell << ") = " << d.alphabet[static_cast<std::size_t>(d.initial[r][c])] << ";\n";
      for (std::size_t i = 0; i < nb; ++i)
        out << "  Nb_" << i << "(" << cell << ") = " << neighbour(r, c, d.neighborhood[i]) << ";\n";
      if (!d.synchronous) out << "  Stamp(" << cell << ") = 0;\n";
    }
  if (!d.wrap) out << "  Val(edge) = " << d.alphabet[static_cast<std::size_t>(d.fixed_value)] << ";\n";
  if (!d.synchronous) out << "  Gen = 0;\n";
  for (std::size_t idx = 0; idx < d.table.size(); ++idx) {
    std::vector<std::string> args(nb);
    std::size_t rest = idx;
    for (std::size_t i = nb; i-- > 0;) {
      args[i] = d.alphabet[rest % k];
      rest /= k;
    }
    out << "  Next(" << join(args, ", ") << ") = " << d.alphabet[static_cast<std::size_t>(d.table[idx])] << ";\n";
  }
  out << "}\n";
  out << "config {\n  max_steps = " << std::max<std::size_t>(1, ca_steps(d)) << ";\n";
  if (d.synchronous) out << "  strategy = transformed;\n";
  out << "}\n";
  return out.str();
}

dsl::Program compile_cellular_automaton(const CellularAutomatonDesc& d) {
  return dsl::load(emit_cellular_automaton(d), "<cellular automaton>");
}

std::vector<std::vector<int>> read_grid(const CellularAutomatonDesc& d, const WorldState& w) {
  std::vector<std::vector<int>> g(d.height, std::vector<int>(d.width, -1));
  for (std::size_t r = 0; r < d.height; ++r)
    for (std::size_t c = 0; c < d.width; ++c) {
      const Value& v = w.get(make_key("Val", {Value::atom(cell_name(r, c))}));
      for (std::size_t a = 0; a < d.alphabet.size(); ++a)
        if (d.alphabet[a] == v.text()) g[r][c] = static_cast<int>(a);
    }
  return g;
}

}  // namespace sps::enc
