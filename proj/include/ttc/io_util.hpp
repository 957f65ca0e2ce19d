#pragma once

#include <map>
#include <string>
#include <vector>

#include "ttc/eval.hpp"

namespace ttc {

// Quotes a CSV field only when it needs it (commas, quotes, newlines).
std::string csv_escape(const std::string& field);

// Splits one CSV line honoring double-quote escaping.
std::vector<std::string> csv_split(const std::string& line);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// id,label rows with a header line.
void write_labeled_partition_csv(const LabeledPartition& partition, const std::string& path);
LabeledPartition read_labeled_partition_csv(const std::string& path);

}  // namespace ttc
