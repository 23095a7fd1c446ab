#include "stencil_lab/reference_data.hpp"

namespace stencil_lab {

const std::array<ReferenceRow, 60>& reference_disc_sweep() {
    static const std::array<ReferenceRow, 60> rows{{
        {10, 0.000248, 7.2e-05, 3.44, 0.00397},
        {11, 8.1e-05, 2.46e-05, 0.0473, 0.00279},
        {12, 0.00021, 8.12e-05, 0.0397, 0.00329},
        {13, 0.000317, 0.000129, 0.02, 0.00399},
        {14, 0.000404, 0.000169, 0.0208, 0.00469},
        {15, 0.000457, 0.000193, 0.0187, 0.00516},
        {16, 0.000491, 0.000209, 0.0203, 0.00546},
        {17, 0.000498, 0.000213, 0.02, 0.00553},
        {18, 0.000479, 0.000206, 0.0206, 0.00533},
        {19, 0.000443, 0.000191, 0.0189, 0.00498},
        {20, 0.000392, 0.00017, 0.0192, 0.0045},
        {21, 0.000335, 0.000146, 0.0173, 0.00398},
        {22, 0.000274, 0.000121, 0.0165, 0.00348},
        {23, 0.000217, 9.73e-05, 0.017, 0.00306},
        {24, 0.000163, 7.55e-05, 0.0156, 0.00273},
        {25, 0.000115, 5.49e-05, 0.0164, 0.00245},
        {26, 6.84e-05, 3.35e-05, 0.0135, 0.00226},
        {27, 3.22e-05, 1.36e-05, 0.0115, 0.00214},
        {28, 2.96e-05, 8.13e-06, 0.0102, 0.00208},
        {29, 6.96e-05, 2.44e-05, 0.0116, 0.00208},
        {30, 0.000102, 3.95e-05, 0.011, 0.00213},
        {31, 0.000131, 5.3e-05, 0.0102, 0.00219},
        {32, 0.000153, 6.33e-05, 0.0101, 0.00223},
        {33, 0.000165, 6.94e-05, 0.0112, 0.00227},
        {34, 0.00017, 7.23e-05, 0.0107, 0.00226},
        {35, 0.000166, 7.15e-05, 0.00982, 0.0022},
        {36, 0.000158, 6.89e-05, 0.00917, 0.00211},
        {37, 0.000146, 6.46e-05, 0.0081, 0.002},
        {38, 0.00013, 5.82e-05, 0.00879, 0.00186},
        {39, 0.000114, 5.19e-05, 0.00893, 0.00174},
        {40, 9.66e-05, 4.5e-05, 0.00781, 0.00161},
        {41, 7.97e-05, 3.81e-05, 0.00769, 0.00149},
        {42, 6.53e-05, 3.17e-05, 0.00813, 0.0014},
        {43, 5.07e-05, 2.51e-05, 0.00806, 0.00133},
        {44, 3.43e-05, 1.76e-05, 0.00737, 0.00126},
        {45, 2.21e-05, 1.02e-05, 0.00814, 0.00123},
        {46, 1.27e-05, 3.67e-06, 0.0147, 0.00122},
        {47, 2.23e-05, 5.99e-06, 0.0147, 0.00122},
        {48, 3.92e-05, 1.23e-05, 0.014, 0.00124},
        {49, 5.42e-05, 1.91e-05, 0.0131, 0.00127},
        {50, 6.84e-05, 2.55e-05, 0.013, 0.00133},
        {51, 8.23e-05, 3.16e-05, 0.0118, 0.00137},
        {52, 9.29e-05, 3.68e-05, 0.0125, 0.00143},
        {53, 0.000103, 4.15e-05, 0.0122, 0.00147},
        {54, 0.000111, 4.52e-05, 0.0123, 0.00151},
        {55, 0.000115, 4.76e-05, 0.012, 0.00153},
        {56, 0.000118, 4.94e-05, 0.0112, 0.00154},
        {57, 0.000119, 5.03e-05, 0.0128, 0.00156},
        {58, 0.000119, 5.1e-05, 0.0139, 0.00156},
        {59, 0.000117, 5.06e-05, 0.0142, 0.00155},
        {60, 0.000116, 5.02e-05, 0.0138, 0.00154},
        {61, 0.000112, 4.92e-05, 0.0134, 0.00151},
        {62, 0.000108, 4.8e-05, 0.0132, 0.00148},
        {63, 0.000105, 4.67e-05, 0.0181, 0.00145},
        {64, 0.000101, 4.51e-05, 0.0182, 0.00142},
        {65, 9.68e-05, 4.34e-05, 0.0167, 0.00138},
        {66, 9.22e-05, 4.15e-05, 0.0159, 0.00133},
        {67, 8.74e-05, 3.96e-05, 0.0167, 0.00129},
        {68, 8.23e-05, 3.75e-05, 0.0171, 0.00124},
        {69, 7.69e-05, 3.52e-05, 0.017, 0.00118},
    }};
    return rows;
}

}  // namespace stencil_lab
