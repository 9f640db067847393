#include "halc/hashing.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <memory>
#include <vector>

#include "halc/common.hpp"

namespace halc {

namespace {

std::string to_hex(const unsigned char* digest, unsigned int len) {
    static const char* hex = "0123456789abcdef";
    std::string out(len * 2, '0');
    for (unsigned int i = 0; i < len; ++i) {
        out[2 * i] = hex[digest[i] >> 4];
        out[2 * i + 1] = hex[digest[i] & 0xf];
    }
    return out;
}

}  // namespace

std::string sha256_hex(std::span<const unsigned char> bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr))
        throw NumericError("sha256: digest failed");
    return to_hex(digest, len);
}

std::string sha256_hex(const std::string& s) {
    return sha256_hex(std::span<const unsigned char>(
        reinterpret_cast<const unsigned char*>(s.data()), s.size()));
}

std::string sha256_file_hex(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("sha256: cannot open " + path.string());
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || !EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr))
        throw NumericError("sha256: init failed");
    std::vector<char> buf(1 << 16);
    while (is) {
        is.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        std::streamsize got = is.gcount();
        if (got > 0 && !EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<size_t>(got)))
            throw NumericError("sha256: update failed");
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_DigestFinal_ex(ctx.get(), digest, &len)) throw NumericError("sha256: final failed");
    return to_hex(digest, len);
}

}  // namespace halc
