#include <gmp.h>

#include "histspec/errors.hpp"
#include "histspec/histogram.hpp"

namespace histspec {

mpz_class count_images_with_histogram(const Histogram& h) {
    const std::uint64_t total = h.total();
    if (total == 0) {
        throw InvalidArgument("histogram must count at least one pixel");
    }

    mpz_class numerator;
    mpz_fac_ui(numerator.get_mpz_t(), total);

    mpz_class denominator = 1;
    mpz_class factorial;
    for (std::uint64_t c : h.counts()) {
        if (c > 1) {
            mpz_fac_ui(factorial.get_mpz_t(), c);
            denominator *= factorial;
        }
    }

    mpz_class result;
    mpz_divexact(result.get_mpz_t(), numerator.get_mpz_t(),
                 denominator.get_mpz_t());
    return result;
}

}  // namespace histspec
