#ifndef PERCAP_REFERENCE_TABLES_HPP
#define PERCAP_REFERENCE_TABLES_HPP

// ============================================================================
// Published reference values for the six capacity tables (two per margin
// kappa in {0, 0.5, 1}, four allowed-error fractions each).  The CLI's
// `tables` command recomputes every row and appends deviations against
// these values; the test suite pins its reproduction tolerances to them.
//
// Note: the source table for kappa = 0 prints the header of its second
// column as 0.01, but the printed values in that column (nu_c3to0 = 1.6423,
// alpha_u = 5.7113) are reproduced exactly by f_wb = 0.10; the row is
// recorded here as 0.10 and flagged so that output carries a footnote.
// ============================================================================

#include <array>

namespace percap {

struct ReferenceRow {
    int table_id;        // 1..6
    double kappa;
    double f_wb;
    bool header_typo;    // true for the row published under the 0.01 header
    // Published values:
    double xi_hat;       // residual of the minimized condition (~0 or ~1e-6)
    double c3;           // optimizing c3 (0 marks the small-c3 boundary)
    double gamma;        // optimizing gamma (1/2 at the boundary)
    double nu;           // optimizing nu
    double alpha_low;    // lifted bound
    double nu_c3to0;     // boundary stationary nu_hat
    double alpha_u;      // small-c3 bound
};

inline constexpr std::array<ReferenceRow, 24> kReferenceTables = {{
    // table, kappa, f_wb,  typo,  xi_hat,    c3,     gamma,  nu,     a_low,   nu0,    a_u
    {1, 0.0, 0.05, false, 0.0,      0.0,     0.5,    2.7055, 3.5669,  2.7055, 3.5669},
    {1, 0.0, 0.08, false, 0.0,      0.0,     0.5,    1.9742, 4.7368,  1.9742, 4.7368},
    {1, 0.0, 0.10, true,  5.475e-7, 0.7907,  0.3400, 1.0056, 5.5910,  1.6423, 5.7113},
    {1, 0.0, 0.12, false, 3.389e-6, 1.1211,  0.2929, 0.7055, 6.6138,  1.3806, 6.8987},
    {2, 0.0, 0.13, false, 7.155e-6, 1.2827,  0.2733, 0.5971, 7.1892,  1.2687, 7.5920},
    {2, 0.0, 0.15, false, 3.165e-6, 1.6059,  0.2398, 0.4338, 8.4974,  1.0741, 9.2296},
    {2, 0.0, 0.18, false, 3.785e-6, 2.1064,  0.1996, 0.2748, 10.9700, 0.8379, 12.5300},
    {2, 0.0, 0.20, false, 7.876e-7, 2.4613,  0.1775, 0.2043, 13.0802, 0.7083, 15.5332},
    {3, 0.5, 0.15, false, 0.0,      0.0,     0.5,    2.3606, 2.6452,  2.3606, 2.6452},
    {3, 0.5, 0.20, false, 1.161e-6, 0.2694,  0.4372, 1.5159, 3.6298,  1.7999, 3.6393},
    {3, 0.5, 0.23, false, 1.325e-6, 0.6225,  0.3680, 1.0425, 4.3850,  1.5347, 4.4472},
    {3, 0.5, 0.25, false, 2.548e-6, 0.85038, 0.3307, 0.8225, 4.9772,  1.3794, 5.1086},
    {4, 0.5, 0.28, false, 4.632e-6, 1.1921,  0.2841, 0.5830, 6.0383,  1.1725, 6.3476},
    {4, 0.5, 0.30, false, 2.195e-6, 1.4254,  0.2576, 0.4656, 6.8916,  1.0494, 7.3889},
    {4, 0.5, 0.33, false, 2.778e-6, 1.7919,  0.2234, 0.3329, 8.4625,  0.8834, 9.3980},
    {4, 0.5, 0.35, false, 1.422e-6, 2.0525,  0.2033, 0.2659, 9.7620,  0.7838, 11.1434},
    {5, 1.0, 0.20, false, 0.0,      0.0,     0.5,    3.3916, 1.3715,  3.3916, 1.3715},
    {5, 1.0, 0.25, false, 0.0,      0.0,     0.5,    2.8039, 1.7398,  2.8039, 1.7398},
    {5, 1.0, 0.30, false, 0.0,      0.0,     0.5,    2.3238, 2.2374,  2.3238, 2.2374},
    {5, 1.0, 0.35, false, 3.320e-6, 0.2127,  0.4496, 1.6771, 2.9259,  1.9191, 2.9313},
    {6, 1.0, 0.40, false, 3.358e-6, 0.6596,  0.3616, 1.0496, 3.8664,  1.5709, 3.9355},
    {6, 1.0, 0.43, false, 1.476e-6, 0.9322,  0.3186, 0.7950, 4.6040,  1.3839, 4.7662},
    {6, 1.0, 0.47, false, 5.605e-6, 1.3155,  0.2696, 0.5470, 5.8853,  1.1562, 6.2858},
    {6, 1.0, 0.50, false, 2.594e-6, 1.6281,  0.2377, 0.4103, 7.1643,  1.0000, 7.8879},
}};

}  // namespace percap

#endif  // PERCAP_REFERENCE_TABLES_HPP
