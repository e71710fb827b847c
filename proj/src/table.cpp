#include "hbtdit/table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hbtdit/errors.hpp"

namespace hbtdit {
namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

void CsvTable::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) throw DomainError("CSV row width does not match the header");
  rows.push_back(std::move(row));
}

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw DomainError("no CSV column named '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> CsvTable::column_values(const std::string& name) const {
  const auto c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[c]);
  return out;
}

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.8e", value);
  return buf;
}

std::string to_csv(const CsvTable& table) {
  std::string out;
  for (const auto& m : table.metadata) out += "# " + m + "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      table.metadata.push_back(trim(line.substr(1)));
      continue;
    }
    auto cells = split(line, ',');
    if (!have_header) {
      for (auto& c : cells) table.columns.push_back(trim(c));
      have_header = true;
      continue;
    }
    if (cells.size() != table.columns.size()) {
      std::ostringstream os;
      os << "CSV line " << lineno << ": expected " << table.columns.size() << " fields, got " << cells.size();
      throw DomainError(os.str());
    }
    std::vector<double> row;
    for (const auto& c : cells) {
      const std::string s = trim(c);
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      if (s.empty() || end != s.c_str() + s.size()) {
        std::ostringstream os;
        os << "CSV line " << lineno << ": '" << s << "' is not a number";
        throw DomainError(os.str());
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  if (!have_header) throw DomainError("CSV has no header row");
  return table;
}

std::string emit_svg(const std::string& csv_text, const std::string& title) {
  const CsvTable t = parse_csv(csv_text);
  if (t.columns.size() < 2) throw DomainError("SVG plot needs at least two columns");
  if (t.rows.size() < 2) throw DomainError("SVG plot needs at least two data rows to draw a line");

  constexpr double width = 800, height = 500;
  constexpr double left = 80, right = 180, top = 40, bottom = 60;
  const double pw = width - left - right, ph = height - top - bottom;

  double xmin = t.rows.front()[0], xmax = xmin, ymin = t.rows.front()[1], ymax = ymin;
  for (const auto& r : t.rows) {
    xmin = std::min(xmin, r[0]);
    xmax = std::max(xmax, r[0]);
    for (std::size_t c = 1; c < r.size(); ++c) {
      ymin = std::min(ymin, r[c]);
      ymax = std::max(ymax, r[c]);
    }
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty())
    os << "<text x=\"" << left << "\" y=\"24\" font-size=\"14\">" << xml_escape(title) << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = xmin + (xmax - xmin) * i / 4.0;
    const double fy = ymin + (ymax - ymin) * i / 4.0;
    os << "<line x1=\"" << fixed(px(fx)) << "\" y1=\"" << fixed(top + ph) << "\" x2=\"" << fixed(px(fx))
       << "\" y2=\"" << fixed(top + ph + 5) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << fixed(px(fx)) << "\" y=\"" << fixed(top + ph + 18) << "\" text-anchor=\"middle\">"
       << tick_label(fx) << "</text>\n";
    os << "<line x1=\"" << fixed(left - 5) << "\" y1=\"" << fixed(py(fy)) << "\" x2=\"" << fixed(left)
       << "\" y2=\"" << fixed(py(fy)) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << fixed(left - 8) << "\" y=\"" << fixed(py(fy) + 4) << "\" text-anchor=\"end\">"
       << tick_label(fy) << "</text>\n";
  }
  os << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"" << fixed(height - 15) << "\" text-anchor=\"middle\">"
     << xml_escape(t.columns[0]) << "</text>\n";

  for (std::size_t c = 1; c < t.columns.size(); ++c) {
    const char* colour = palette[(c - 1) % std::size(palette)];
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      if (r) os << ' ';
      os << fixed(px(t.rows[r][0])) << ',' << fixed(py(t.rows[r][c]));
    }
    os << "\"/>\n";
    const double ly = top + 10 + 18.0 * static_cast<double>(c - 1);
    os << "<line x1=\"" << fixed(left + pw + 10) << "\" y1=\"" << fixed(ly) << "\" x2=\"" << fixed(left + pw + 30)
       << "\" y2=\"" << fixed(ly) << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << fixed(left + pw + 35) << "\" y=\"" << fixed(ly + 4) << "\">"
       << xml_escape(t.columns[c]) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace hbtdit
