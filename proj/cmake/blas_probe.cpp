// Copyright 2026 The qhd Authors
// SPDX-License-Identifier: Apache-2.0

// Exits 0 when dgemm agrees with a naive product on a 400x400 case.
#include <cblas.h>

#include <cmath>
#include <cstdio>
#include <vector>

int main() {
  const int n = 400;
  std::vector<double> a(n * n), b(n * n), c(n * n, 0.0);
  for (int i = 0; i < n * n; ++i) {
    a[i] = std::sin(0.37 * i);
    b[i] = std::cos(0.11 * i);
  }
  cblas_dgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, n, n, n, 1.0, a.data(), n, b.data(), n,
              0.0, c.data(), n);
  double worst = 0.0;
  for (int j = 0; j < n; j += 7) {
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += a[i + k * n] * b[k + j * n];
      worst = std::max(worst, std::abs(s - c[i + j * n]));
    }
  }
  std::printf("%g\n", worst);
  return worst < 1e-9 ? 0 : 1;
}
