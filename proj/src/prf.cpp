#include "ppxgb/prf.hpp"

#include <openssl/hmac.h>

#include <stdexcept>

#include "ppxgb/bigint.hpp"

namespace ppxgb {

PrfKey prf_keygen(unsigned k, RandomSource& rng) {
    if (k != 128 && k != 256)
        throw std::invalid_argument("prf_keygen: security parameter must be 128 or 256");
    PrfKey key;
    key.bytes.resize(k / 8);
    rng.fill(key.bytes.data(), key.bytes.size());
    return key;
}

std::string pseudonym(const PrfKey& key, std::string_view feature_name) {
    if (feature_name.empty())
        throw std::invalid_argument("pseudonym: empty feature name");
    if (key.bytes.empty())
        throw std::invalid_argument("pseudonym: empty key");
    unsigned char md[32];
    unsigned int md_len = 0;
    HMAC(EVP_sha256(), key.bytes.data(), static_cast<int>(key.bytes.size()),
         reinterpret_cast<const unsigned char*>(feature_name.data()), feature_name.size(),
         md, &md_len);
    return bytes_to_hex(md, 16);
}

}  // namespace ppxgb
