#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace mal {

/// 32-byte transaction id. Ordering matches the lexicographic order of the
/// lowercase hex form.
class TxId {
 public:
  TxId() = default;
  explicit TxId(const std::array<std::uint8_t, 32>& bytes) : bytes_(bytes) {}

  /// Accepts exactly 64 lowercase hex characters.
  static std::optional<TxId> from_hex(std::string_view hex);

  std::string hex() const;
  const std::array<std::uint8_t, 32>& bytes() const { return bytes_; }

  friend auto operator<=>(const TxId&, const TxId&) = default;

 private:
  std::array<std::uint8_t, 32> bytes_{};
};

struct TxIdHash {
  std::size_t operator()(const TxId& id) const noexcept {
    // ids are uniformly distributed hashes already
    std::size_t h = 0;
    for (int i = 0; i < 8; ++i) h = (h << 8) | id.bytes()[i];
    return h;
  }
};

}  // namespace mal
