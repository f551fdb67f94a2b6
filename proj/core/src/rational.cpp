#include "pakmarket/rational.hpp"

#include "pakmarket/errors.hpp"

namespace pakmarket {

namespace {

long long to_i64(const mpz_class& z, const char* what) {
    if (!z.fits_slong_p())
        throw ResourceError(std::string(what) + " does not fit in 64 bits");
    return static_cast<long long>(z.get_si());
}

} // namespace

long long rat_num_i64(const Rat& r) { return to_i64(r.get_num(), "rational numerator"); }
long long rat_den_i64(const Rat& r) { return to_i64(r.get_den(), "rational denominator"); }

} // namespace pakmarket
