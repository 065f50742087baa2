#ifndef SEQMD_MODELS_CHECKPOINT_H_
#define SEQMD_MODELS_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "seqmd/models/model.h"

namespace seqmd {

// File layout:
//   "SEQMDCK1" | u64 LE header length | header JSON | f64 LE payloads
// The header holds the model spec, seed lineage and [{name, shape}] in
// payload order.
struct Checkpoint {
  struct Entry {
    std::string name;
    Tensor value;
  };
  ModelSpec spec;
  std::vector<std::uint64_t> seed_lineage;
  std::vector<Entry> params;

  const Entry* Find(const std::string& name) const;
};

inline constexpr char kCheckpointMagic[] = "SEQMDCK1";
inline constexpr int kCheckpointVersion = 1;

Checkpoint Snapshot(const RankingModel& model);

void WriteCheckpoint(const Checkpoint& ck, std::ostream& out);
void SaveCheckpoint(const RankingModel& model, const std::filesystem::path& path);
// Throws FormatError naming the offending parameter where possible.
Checkpoint ReadCheckpoint(std::istream& in);
Checkpoint ReadCheckpoint(const std::filesystem::path& path);

// Builds `target` (or the stored spec) and copies every stored parameter.
// When the target SEQ model has exactly one task more than the checkpoint,
// only that task's token MLP and mask MLP are left at their fresh seeded
// values. Any other missing, unknown or reshaped parameter is an error.
std::unique_ptr<RankingModel> LoadModel(const Checkpoint& ck,
                                        const std::optional<ModelSpec>& target = std::nullopt);
std::unique_ptr<RankingModel> LoadCheckpoint(
    const std::filesystem::path& path, const std::optional<ModelSpec>& target = std::nullopt);

// Copies stored values into an existing model with identical parameter names
// and shapes.
void RestoreParameters(const Checkpoint& ck, RankingModel& model);

}  // namespace seqmd

#endif  // SEQMD_MODELS_CHECKPOINT_H_
