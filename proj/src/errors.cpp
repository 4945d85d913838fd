#include "lpvmm/errors.hpp"

namespace lpvmm {

ValidationError::ValidationError(std::vector<std::string> issues)
    : Error([&] {
          std::string msg = "invalid model";
          for (const auto& s : issues) msg += "\n  - " + s;
          return msg;
      }()),
      issues_(std::move(issues)) {}

RankConditionError::RankConditionError(int rank_v, int rank_w, int rank_wv)
    : Error("rank condition violated: rank(V)=" + std::to_string(rank_v) +
            ", rank(W)=" + std::to_string(rank_w) + ", rank(WV)=" + std::to_string(rank_wv)),
      rank_v_(rank_v),
      rank_w_(rank_w),
      rank_wv_(rank_wv) {}

}  // namespace lpvmm
