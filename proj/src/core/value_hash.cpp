#include "riskgate/core/value_hash.hpp"

#include <openssl/evp.h>

#include <array>
#include <memory>

#include "riskgate/core/errors.hpp"

namespace riskgate {

FeatureValue ValueHasher::hash(const FeatureValue& value) const {
  if (value.is_missing()) return value;

  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), salt_.data(), salt_.size()) != 1 ||
      EVP_DigestUpdate(ctx.get(), value.token().data(), value.token().size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &length) != 1) {
    throw Error(Errc::io_error, "SHA-256 failed");
  }

  static constexpr char kHex[] = "0123456789abcdef";
  std::string out = "h:";
  for (unsigned int i = 0; i < 16 && i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0x0f]);
  }
  return FeatureValue(std::move(out));
}

void ValueHasher::apply(FeatureMap& features) const {
  for (auto& [name, value] : features) value = hash(value);
}

}  // namespace riskgate
