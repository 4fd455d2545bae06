#include "affhj/model_file.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "affhj/hj.hpp"

namespace affhj {

ModelFileError::ModelFileError(std::size_t line, const std::string& message)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

namespace {

struct Entry {
  std::string value;
  std::size_t line;
};

using Table = std::map<std::string, std::map<std::string, Entry>>;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(trim(std::string_view(s).substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

const std::set<std::string, std::less<>> reserved{"sin", "cos", "tan", "exp", "log", "sqrt"};

const std::set<std::string> known_sections{"space", "anchor", "structure", "hamiltonian", "sections", "sampling"};

Table read_table(std::string_view text) {
  Table table;
  std::string current;
  std::size_t lineno = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ModelFileError(lineno, "unterminated section header");
      current = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!known_sections.contains(current)) throw ModelFileError(lineno, "unknown section [" + current + "]");
      if (table.contains(current)) throw ModelFileError(lineno, "section [" + current + "] appears twice");
      table[current];
      continue;
    }
    if (current.empty()) throw ModelFileError(lineno, "entry outside of any section");
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ModelFileError(lineno, "expected 'key = value'");
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ModelFileError(lineno, "empty key");
    if (value.empty()) throw ModelFileError(lineno, "empty value for '" + key + "'");
    if (current == "structure" && key.find(',') != std::string::npos) {
      key.erase(std::remove_if(key.begin(), key.end(), [](char c) { return c == ' ' || c == '\t'; }), key.end());
    }
    auto [it, fresh] = table[current].emplace(key, Entry{value, lineno});
    if (!fresh) throw ModelFileError(lineno, "duplicate key '" + key + "' (first on line " + std::to_string(it->second.line) + ")");
  }
  return table;
}

class Reader {
 public:
  explicit Reader(Table t) : table_(std::move(t)) {}

  std::optional<Entry> find(const std::string& section, const std::string& key) {
    auto s = table_.find(section);
    if (s == table_.end()) return std::nullopt;
    auto e = s->second.find(key);
    if (e == s->second.end()) return std::nullopt;
    Entry out = e->second;
    s->second.erase(e);
    return out;
  }

  Entry need(const std::string& section, const std::string& key) {
    auto e = find(section, key);
    if (!e) throw ModelFileError(0, "missing [" + section + "] " + key);
    return *e;
  }

  std::map<std::string, Entry> take(const std::string& section) {
    auto s = table_.find(section);
    if (s == table_.end()) return {};
    auto out = std::move(s->second);
    s->second.clear();
    return out;
  }

  void finish() const {
    for (const auto& [section, entries] : table_)
      if (!entries.empty()) {
        const auto& [key, e] = *entries.begin();
        throw ModelFileError(e.line, "unknown key '" + key + "' in [" + section + "]");
      }
  }

 private:
  Table table_;
};

template <typename T>
T parse_number(const Entry& e, const std::string& what) {
  T v{};
  const std::string s = trim(e.value);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ModelFileError(e.line, "bad " + what + " '" + s + "'");
  return v;
}

Expr parse_expr(const std::string& src, std::size_t line, const std::set<std::string>& allowed) {
  Expr e;
  try {
    e = parse(src);
  } catch (const ParseError& err) {
    throw ModelFileError(line, "in '" + src + "': " + err.what());
  }
  for (const auto& v : e.free_variables())
    if (!allowed.contains(v)) throw ModelFileError(line, "unknown variable '" + v + "' in '" + src + "'");
  return e;
}

std::vector<Expr> parse_row(const std::string& src, std::size_t line, std::size_t size,
                            const std::set<std::string>& allowed, const std::string& what) {
  const auto parts = split(src, ',');
  if (parts.size() != size)
    throw ModelFileError(line, what + " needs " + std::to_string(size) + " entries, got " + std::to_string(parts.size()));
  std::vector<Expr> out;
  for (const auto& p : parts) out.push_back(parse_expr(p, line, allowed));
  return out;
}

std::vector<std::vector<Expr>> parse_rows(const Entry& e, std::size_t rows, std::size_t cols,
                                          const std::set<std::string>& allowed, const std::string& what) {
  std::vector<std::vector<Expr>> out;
  if (rows == 0) return out;
  const auto parts = split(e.value, ';');
  if (parts.size() != rows)
    throw ModelFileError(e.line, what + " needs " + std::to_string(rows) + " rows, got " + std::to_string(parts.size()));
  for (const auto& p : parts) out.push_back(parse_row(p, e.line, cols, allowed, what));
  return out;
}

std::vector<std::string> parse_names(const Entry& e, std::size_t count, const std::string& what) {
  const auto names = split(e.value, ',');
  if (names.size() != count)
    throw ModelFileError(e.line, what + " needs " + std::to_string(count) + " names, got " + std::to_string(names.size()));
  for (const auto& v : names) {
    const bool ok = !v.empty() && (std::isalpha(static_cast<unsigned char>(v[0])) || v[0] == '_') &&
                    std::all_of(v.begin(), v.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
    if (!ok) throw ModelFileError(e.line, "bad variable name '" + v + "'");
    if (reserved.contains(v))
      throw ModelFileError(e.line, "variable name '" + v + "' is a function name");
  }
  return names;
}

}  // namespace

ModelBundle parse_model(std::string_view text, const std::string& name) {
  Reader r(read_table(text));

  const Entry m_entry = r.need("space", "m");
  const Entry n_entry = r.need("space", "n");
  const auto m = parse_number<std::size_t>(m_entry, "dimension");
  const auto n = parse_number<std::size_t>(n_entry, "rank");
  if (m == 0) throw ModelFileError(m_entry.line, "m must be positive");
  const auto base = parse_names(r.need("space", "vars"), m, "vars");
  std::vector<std::string> fiber;
  if (auto f = r.find("space", "fiber")) {
    fiber = parse_names(*f, n, "fiber");
  } else {
    for (std::size_t k = 1; k <= n; ++k) fiber.push_back("y" + std::to_string(k));
  }
  std::set<std::string> base_set(base.begin(), base.end());
  if (base_set.size() != m) throw ModelFileError(m_entry.line, "duplicate base variable");
  std::set<std::string> phase_set = base_set;
  for (const auto& v : fiber)
    if (!phase_set.insert(v).second) throw ModelFileError(n_entry.line, "fiber variable '" + v + "' is already in use");

  const Entry rho0_entry = r.need("anchor", "rho0");
  const auto rho0 = parse_row(rho0_entry.value, rho0_entry.line, m, base_set, "rho0");
  std::vector<std::vector<Expr>> rhoV;
  if (n > 0) rhoV = parse_rows(r.need("anchor", "rhoV"), n, m, base_set, "rhoV");

  std::vector<std::vector<Expr>> c0(n, std::vector<Expr>(n, Expr(0.0)));
  if (auto e = r.find("structure", "C0")) c0 = parse_rows(*e, n, n, base_set, "C0");
  std::vector<Expr> cv(n * n * n, Expr(0.0));
  std::set<std::array<std::size_t, 3>> seen;
  for (const auto& [key, e] : r.take("structure")) {
    const auto idx = split(key, ',');
    if (idx.size() != 3) throw ModelFileError(e.line, "unknown key '" + key + "' in [structure]");
    std::array<std::size_t, 3> abc{};
    for (std::size_t k = 0; k < 3; ++k) {
      abc[k] = parse_number<std::size_t>(Entry{idx[k], e.line}, "index");
      if (abc[k] < 1 || abc[k] > n) throw ModelFileError(e.line, "index out of range 1.." + std::to_string(n));
      --abc[k];
    }
    if (abc[0] == abc[1]) throw ModelFileError(e.line, "C^c_{aa} vanishes by antisymmetry");
    if (!seen.insert({std::min(abc[0], abc[1]), std::max(abc[0], abc[1]), abc[2]}).second)
      throw ModelFileError(e.line, "structure entry given twice");
    const Expr value = parse_expr(e.value, e.line, base_set);
    cv[AffgebroidChart::cv_index(n, abc[0], abc[1], abc[2])] = value;
    cv[AffgebroidChart::cv_index(n, abc[1], abc[0], abc[2])] = -value;
  }

  const Entry h_entry = r.need("hamiltonian", "H");
  const Expr hamiltonian = parse_expr(h_entry.value, h_entry.line, phase_set);

  AffgebroidChart chart(base, fiber, rho0, rhoV, c0, cv);
  ModelBundle bundle{name, chart, hamiltonian, {}, SamplePlan::unit(m + n)};

  std::map<std::string, std::map<std::string, Entry>> by_name;
  for (auto& [key, e] : r.take("sections")) {
    const auto dot = key.rfind('.');
    if (dot == std::string::npos || dot == 0) throw ModelFileError(e.line, "section keys look like name.alpha0");
    by_name[key.substr(0, dot)][key.substr(dot + 1)] = e;
  }
  for (auto& [sname, parts] : by_name) {
    std::optional<CoSection> alpha;
    if (auto it = parts.find("potential"); it != parts.end()) {
      if (parts.size() > 1) throw ModelFileError(it->second.line, "'" + sname + ".potential' excludes other components");
      alpha = coboundary(chart, parse_expr(it->second.value, it->second.line, base_set));
    } else {
      Expr a0(0.0);
      std::vector<Expr> av(n, Expr(0.0));
      for (const auto& [field, e] : parts) {
        if (field == "alpha0") {
          a0 = parse_expr(e.value, e.line, base_set);
        } else if (field == "alphaV") {
          av = parse_row(e.value, e.line, n, base_set, "alphaV");
        } else {
          throw ModelFileError(e.line, "unknown section component '" + field + "'");
        }
      }
      alpha.emplace(chart, a0, av);
    }
    bundle.sections.emplace_back(sname, *alpha);
  }

  if (auto e = r.find("sampling", "box")) {
    const auto parts = split(e->value, ',');
    if (parts.size() != m && parts.size() != m + n)
      throw ModelFileError(e->line, "box needs m or m+n intervals");
    for (std::size_t k = 0; k < parts.size(); ++k) {
      const auto ends = split(parts[k], ':');
      if (ends.size() != 2) throw ModelFileError(e->line, "intervals look like lo:hi");
      const double lo = parse_number<double>(Entry{ends[0], e->line}, "bound");
      const double hi = parse_number<double>(Entry{ends[1], e->line}, "bound");
      if (!(lo < hi)) throw ModelFileError(e->line, "empty interval '" + parts[k] + "'");
      bundle.plan.box[k] = {lo, hi};
    }
  }
  if (auto e = r.find("sampling", "count")) bundle.plan.count = parse_number<std::size_t>(*e, "count");
  if (auto e = r.find("sampling", "seed")) bundle.plan.seed = parse_number<std::uint64_t>(*e, "seed");
  r.finish();
  return bundle;
}

ModelBundle load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelFileError(0, "cannot open model file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str(), std::filesystem::path(path).stem().string());
}

}  // namespace affhj
