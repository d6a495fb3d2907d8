#pragma once

#include <stdexcept>
#include <string>

namespace pfk {

// Thrown when a rational value cannot be reduced modulo the chosen prime,
// i.e. the denominator vanishes mod p. Code that draws primes at random
// catches this and retries with a fresh prime.
class bad_prime_error : public std::runtime_error {
public:
    explicit bad_prime_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pfk
