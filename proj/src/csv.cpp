#include "vortexlab/csv.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "vortexlab/sqdist.hpp"

namespace vortexlab {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header) : out_(out), columns_(header.size()) {
  for (std::size_t k = 0; k < header.size(); ++k) out_ << (k ? "," : "") << header[k];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) throw InvalidArgument("CSV row width does not match the header");
  for (std::size_t k = 0; k < values.size(); ++k) out_ << (k ? "," : "") << format_double(values[k]);
  out_ << '\n';
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t k = 0; k < header.size(); ++k)
    if (header[k] == name) return k;
  throw InvalidArgument("CSV has no column '" + name + "'");
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse(const std::string& s) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  while (b < e && *b == ' ') ++b;
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || ptr != e) {
    // from_chars rejects "inf"/"nan" spellings produced by printf on some platforms.
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan" || s == "-nan") return std::numeric_limits<double>::quiet_NaN();
    throw InvalidArgument("unparseable CSV field '" + s + "'");
  }
  return v;
}

}  // namespace

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("empty CSV input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  t.header = split(line);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != t.header.size()) throw InvalidArgument("ragged CSV row");
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse(f));
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const std::size_t n = traj.strengths.size();
  std::vector<std::string> header{"t"};
  for (std::size_t a = 1; a <= n; ++a) {
    header.push_back("x" + std::to_string(a));
    header.push_back("y" + std::to_string(a));
  }
  for (const char* c : {"H", "I", "absZ", "M", "min_pair_dist"}) header.emplace_back(c);
  CsvWriter w(out, header);
  for (const auto& s : traj.samples) {
    std::vector<double> row{s.time()};
    for (const auto& z : s.state.positions) {
      row.push_back(z.real());
      row.push_back(z.imag());
    }
    row.push_back(s.invariants.energy);
    row.push_back(s.invariants.angular_impulse);
    row.push_back(std::abs(s.invariants.moment));
    row.push_back(s.invariants.m_pair_sum);
    row.push_back(s.min_pair_distance);
    w.row(row);
  }
}

void write_shape_csv(std::ostream& out, const Trajectory& traj) {
  const std::size_t n = traj.strengths.size();
  std::vector<std::string> header{"t", "rho"};
  for (const auto& [i, j] : pair_list(n)) header.push_back("beta_" + std::to_string(i + 1) + std::to_string(j + 1));
  CsvWriter w(out, header);
  for (const auto& s : traj.samples) {
    const auto shape = to_shape(s.state);
    std::vector<double> row{s.time(), shape.rho};
    row.insert(row.end(), shape.beta.begin(), shape.beta.end());
    w.row(row);
  }
}

std::vector<VortexState> read_trajectory_csv(std::istream& in, const std::vector<double>& strengths) {
  const auto table = read_csv(in);
  const std::size_t n = strengths.size();
  const std::size_t tc = table.column("t");
  std::vector<std::size_t> xc, yc;
  for (std::size_t a = 1; a <= n; ++a) {
    xc.push_back(table.column("x" + std::to_string(a)));
    yc.push_back(table.column("y" + std::to_string(a)));
  }
  std::vector<VortexState> out;
  out.reserve(table.rows.size());
  for (const auto& r : table.rows) {
    VortexState s;
    s.strengths = strengths;
    s.time = r[tc];
    for (std::size_t a = 0; a < n; ++a) s.positions.emplace_back(r[xc[a]], r[yc[a]]);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace vortexlab
