#ifndef SEQMD_DATASETS_JSONL_H_
#define SEQMD_DATASETS_JSONL_H_

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "seqmd/datasets/record.h"

namespace seqmd {

// Declared on line 1 of every data file: {"m":..,"p":..,"R":..}.
struct DatasetHeader {
  int m = 0;  // user+query feature count (the last R entries are the region one-hot)
  int p = 0;  // listing feature count
  int regions = 0;

  int feature_dim() const { return m + p; }
  bool operator==(const DatasetHeader&) const = default;
};

struct Dataset {
  DatasetHeader header;
  std::vector<QueryGroup> groups;
};

// One QueryGroup per line after the header. Doubles are written with 17
// significant digits, so a read returns bit-identical values.
void WriteJsonl(const Dataset& data, std::ostream& out);
void WriteJsonl(const Dataset& data, const std::filesystem::path& path);

// Throws FormatError("line N: ...") on malformed input or funnel violations.
// An empty stream yields an empty dataset.
Dataset ReadJsonl(std::istream& in);
Dataset ReadJsonl(const std::filesystem::path& path);

}  // namespace seqmd

#endif  // SEQMD_DATASETS_JSONL_H_
