// Copyright 2026 The qslab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <mpfr.h>

#include <utility>

namespace qsl::detail {

// Owning MPFR value with a fixed binary precision. Arithmetic goes through the
// free functions below so every operation's rounding precision is explicit.
class MpReal {
 public:
  explicit MpReal(mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }
  MpReal(mpfr_prec_t bits, double value) { mpfr_init2(v_, bits); mpfr_set_d(v_, value, MPFR_RNDN); }
  MpReal(const MpReal& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  MpReal& operator=(const MpReal& other) {
    if (this != &other) {
      mpfr_set_prec(v_, mpfr_get_prec(other.v_));
      mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
  }
  MpReal(MpReal&& other) noexcept {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_swap(v_, other.v_);
  }
  MpReal& operator=(MpReal&& other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
  }
  ~MpReal() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

 private:
  mpfr_t v_;
};

// Complex pair of MpReal with the handful of operations the quench sums need.
struct MpComplex {
  MpReal re, im;
  explicit MpComplex(mpfr_prec_t bits) : re(bits), im(bits) {}
};

inline void swap(MpComplex& a, MpComplex& b) {
  mpfr_swap(a.re.get(), b.re.get());
  mpfr_swap(a.im.get(), b.im.get());
}

// out = a * b (out must not alias a or b); scratch holds two temporaries.
inline void mul(MpComplex& out, const MpComplex& a, const MpComplex& b, MpReal& s1, MpReal& s2) {
  mpfr_mul(s1.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_mul(s2.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  mpfr_sub(out.re.get(), s1.get(), s2.get(), MPFR_RNDN);
  mpfr_mul(s1.get(), a.re.get(), b.im.get(), MPFR_RNDN);
  mpfr_mul(s2.get(), a.im.get(), b.re.get(), MPFR_RNDN);
  mpfr_add(out.im.get(), s1.get(), s2.get(), MPFR_RNDN);
}

// acc += scale * z.
inline void add_scaled(MpComplex& acc, const MpReal& scale, const MpComplex& z, MpReal& scratch) {
  mpfr_mul(scratch.get(), scale.get(), z.re.get(), MPFR_RNDN);
  mpfr_add(acc.re.get(), acc.re.get(), scratch.get(), MPFR_RNDN);
  mpfr_mul(scratch.get(), scale.get(), z.im.get(), MPFR_RNDN);
  mpfr_add(acc.im.get(), acc.im.get(), scratch.get(), MPFR_RNDN);
}

// z = exp(i phase).
inline void unit_phase(MpComplex& z, const MpReal& phase) {
  mpfr_sin_cos(z.im.get(), z.re.get(), phase.get(), MPFR_RNDN);
}

}  // namespace qsl::detail
