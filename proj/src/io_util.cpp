#include "ttc/io_util.hpp"

#include <fstream>
#include <sstream>

#include "ttc/errors.hpp"

namespace ttc {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_labeled_partition_csv(const LabeledPartition& partition, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "id,label\n";
  for (const auto& [id, label] : partition) out << csv_escape(id) << ',' << label << '\n';
}

LabeledPartition read_labeled_partition_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open partition file: " + path);
  LabeledPartition partition;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first && line == "id,label") {
      first = false;
      continue;
    }
    first = false;
    const auto fields = csv_split(line);
    if (fields.size() != 2) throw FormatError("bad partition row in " + path + ": " + line);
    try {
      partition[fields[0]] = std::stoi(fields[1]);
    } catch (const std::exception&) {
      throw FormatError("bad label in " + path + ": " + line);
    }
  }
  if (partition.empty()) throw DataError("partition file is empty: " + path);
  return partition;
}

}  // namespace ttc
