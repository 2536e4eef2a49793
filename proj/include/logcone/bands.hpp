#pragma once

// Generated by tools/record_bands from the standard corpus; bands are the
// observed extremes widened by 10%. Index 0 is dimension 1.

namespace logcone::bands {

struct Band {
    double lo;
    double hi;
    constexpr bool contains(double v) const { return lo <= v && v <= hi; }
};

// E(X_i^2) after symmetrization over before, per dimension.
// recorded: dim 1 [0.249981, 1.000000]  dim 2 [0.250078, 1.000000]  dim 3 [0.252743, 1.000000]  
inline constexpr Band kVarianceRetention[] = {
    {0.2250, 1.1000},  // dim 1
    {0.2251, 1.1000},  // dim 2
    {0.2275, 1.1000},  // dim 3
};

// sup-density^(1/d) of the isotropic image.
// recorded: dim 1 [0.288661, 0.995012]  dim 2 [0.282454, 0.963194]  dim 3 [0.278997, 0.406202]  
inline constexpr Band kIsotropicConstant[] = {
    {0.2598, 1.0945},  // dim 1
    {0.2542, 1.0595},  // dim 2
    {0.2511, 0.4468},  // dim 3
};

// Mass of the central coordinate slice of the isotropic image.
// recorded: dim 2 [0.288314, 0.706224]  dim 3 [0.287228, 0.406202]  
inline constexpr Band kSliceMass[] = {
    {0.0, 0.0},  // unused
    {0.2595, 0.7768},  // dim 2
    {0.2585, 0.4468},  // dim 3
};

// Lipschitz constant of X + Y along e_0 times sqrt(Var X_0 Var Y_0).
// recorded: dim 1 [0.072358, 0.120981]  dim 2 [0.025358, 0.048110]  
inline constexpr Band kLipschitzProduct[] = {
    {0.0651, 0.1331},  // dim 1
    {0.0228, 0.0529},  // dim 2
};

// Profile-convolution value at 0 times sqrt(Var g_0 Var h_0).
// recorded: dim 1 [0.083332, 0.159155]  dim 2 [0.025359, 0.063494]  
inline constexpr Band kMainLemmaProduct[] = {
    {0.0750, 0.1751},  // dim 1
    {0.0228, 0.0698},  // dim 2
};

}  // namespace logcone::bands
