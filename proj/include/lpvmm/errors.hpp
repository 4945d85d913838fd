#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace lpvmm {

class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Raised by model construction; `issues()` lists every violated invariant.
class ValidationError : public Error {
   public:
    explicit ValidationError(std::vector<std::string> issues);
    const std::vector<std::string>& issues() const noexcept { return issues_; }

   private:
    std::vector<std::string> issues_;
};

class DimensionError : public Error {
   public:
    using Error::Error;
};

/// An explicit construction or enumeration would exceed its configured cap.
class SizeCapError : public Error {
   public:
    SizeCapError(const std::string& what, unsigned long long required, unsigned long long cap)
        : Error(what), required_(required), cap_(cap) {}
    unsigned long long required() const noexcept { return required_; }
    unsigned long long cap() const noexcept { return cap_; }

   private:
    unsigned long long required_;
    unsigned long long cap_;
};

class OverflowError : public Error {
   public:
    using Error::Error;
};

/// Two-sided reduction needs rank(V) = rank(W) = rank(WV).
class RankConditionError : public Error {
   public:
    RankConditionError(int rank_v, int rank_w, int rank_wv);
    int rank_v() const noexcept { return rank_v_; }
    int rank_w() const noexcept { return rank_w_; }
    int rank_wv() const noexcept { return rank_wv_; }

   private:
    int rank_v_, rank_w_, rank_wv_;
};

}  // namespace lpvmm
