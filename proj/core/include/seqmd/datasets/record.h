#ifndef SEQMD_DATASETS_RECORD_H_
#define SEQMD_DATASETS_RECORD_H_

#include <span>
#include <string>
#include <vector>

namespace seqmd {

// Funnel actions in funnel order.
enum class Task { kClick = 0, kAddToCart = 1, kPurchase = 2 };

inline constexpr Task kAllTasks[] = {Task::kClick, Task::kAddToCart, Task::kPurchase};

const char* TaskName(Task task);
Task ParseTask(const std::string& name);
// "2" -> click,purchase; "3" -> click,add_to_cart,purchase; otherwise a
// comma separated list of task names in funnel order.
std::vector<Task> ParseTaskList(const std::string& text);
std::vector<Task> DefaultTasks(int k);

enum class Platform { kWeb, kApp };

const char* PlatformName(Platform p);
Platform ParsePlatform(const std::string& name);

struct FunnelLabels {
  int click = 0;
  int cart = 0;
  int purchase = 0;

  // purchase <= cart <= click, each in {0, 1}
  bool Valid() const;
  int Get(Task task) const;
  bool operator==(const FunnelLabels&) const = default;
};

// One <user, query, listing> row.
struct InteractionRecord {
  std::string query_id;
  int region = 0;          // buyer region
  Platform platform = Platform::kWeb;
  int listing_region = 0;  // seller region
  std::vector<double> x_user;     // m user+query features
  std::vector<double> x_listing;  // p listing features
  FunnelLabels labels;

  std::size_t feature_count() const { return x_user.size() + x_listing.size(); }
  // Feature j of the concatenated vector (x_user, x_listing).
  double feature(std::size_t j) const {
    return j < x_user.size() ? x_user[j] : x_listing[j - x_user.size()];
  }
  bool is_domestic() const { return listing_region == region; }
  bool operator==(const InteractionRecord&) const = default;
};

// Candidates of one (user, query) impression: the unit of ranking.
struct QueryGroup {
  std::string query_id;
  int region = 0;
  Platform platform = Platform::kWeb;
  std::vector<InteractionRecord> records;

  std::size_t size() const { return records.size(); }
  bool operator==(const QueryGroup&) const = default;
};

// Throws FormatError on the first broken invariant.
void ValidateGroup(const QueryGroup& group, std::size_t m, std::size_t p);

std::size_t RecordCount(std::span<const QueryGroup> groups);

}  // namespace seqmd

#endif  // SEQMD_DATASETS_RECORD_H_
