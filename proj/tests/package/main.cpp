#include "anosov/linear_endo.hpp"

#include <cmath>
#include <cstdio>

int main()
{
    const auto a = anosov::analyze(anosov::make_int_mat({{3, 1}, {1, 1}}));
    const bool ok = a.degree == 2 && std::fabs(a.lambda_u - std::log(2.0 + std::sqrt(2.0))) < 1e-12;
    std::printf("%s\n", ok ? "ok" : "mismatch");
    return ok ? 0 : 1;
}
