#pragma once

#include <array>
#include <cstddef>

namespace snlab::quadrature {

struct NodeWeight {
    double x;
    double w;
};

// Upper-half Gauss-Legendre rules on [0,1]; nodes mirror as (1-x, w).
inline constexpr std::array<NodeWeight, 16> kGL32Half = {{
    {5.24153832843869183e-01, 4.82700442573639060e-02},
    {5.72235980791398258e-01, 4.78193600396374166e-02},
    {6.19643681126068491e-01, 4.69221995404022832e-02},
    {6.65934301141063889e-01, 4.55869393478819315e-02},
    {7.10675638065317639e-01, 4.38260465022019541e-02},
    {7.53449954466114624e-01, 4.16559621134734229e-02},
    {7.93857878620381152e-01, 3.90969478935351555e-02},
    {8.31522133465107616e-01, 3.61728970544242245e-02},
    {8.66091059370144856e-01, 3.29111113881808762e-02},
    {8.97241897983971137e-01, 2.93420467392678519e-02},
    {9.24683806866285041e-01, 2.54990296311881220e-02},
    {9.48160577883026101e-01, 2.14179490111132131e-02},
    {9.67453037968869833e-01, 1.71369314565108129e-02},
    {9.82381127793753195e-01, 1.26960326546312133e-02},
    {9.92805755772634191e-01, 8.13719736545298264e-03},
    {9.98631930924740785e-01, 3.50930500473464919e-03},
}};

inline constexpr std::array<NodeWeight, 4> kGL8Half = {{
    {5.91717321247824835e-01, 1.81341891689180884e-01},
    {7.62766204958164495e-01, 1.56853322938943524e-01},
    {8.98333238706813364e-01, 1.11190517226687172e-01},
    {9.80144928248768088e-01, 5.06142681451883444e-02},
}};

// Integrates f over [a,b] with the given half-rule.
template <std::size_t N, typename F>
double gauss_legendre(const std::array<NodeWeight, N>& half, double a, double b, F&& f) {
    const double len = b - a;
    double acc = 0.0;
    for (const auto& nw : half) {
        acc += nw.w * (f(a + len * nw.x) + f(a + len * (1.0 - nw.x)));
    }
    return len * acc;
}

template <typename F>
double gl32(double a, double b, F&& f) {
    return gauss_legendre(kGL32Half, a, b, static_cast<F&&>(f));
}

template <typename F>
double gl8(double a, double b, F&& f) {
    return gauss_legendre(kGL8Half, a, b, static_cast<F&&>(f));
}

}  // namespace snlab::quadrature
