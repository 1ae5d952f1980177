#pragma once

// Predicted resonance sets: the spectrum of u -> u o E^{-1} on homogeneous
// polynomials (band spectra confined to annuli) combined with the quantum cat
// map eigenphases and the modulus scale |det E|^{-1/2}.

#include "pqcat/quantum.hpp"
#include "pqcat/symplectic.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace pqcat {

struct BandSpectrum {
    int k = 0;
    std::vector<std::complex<double>> eigenvalues;
    double inner = 0.0;  // ||E||^{-k}
    double outer = 0.0;  // ||E^{-1}||^{k}
};

struct ResonancePrediction {
    double modulus_scale = 0.0;  // |det E|^{-1/2}
    std::vector<BandSpectrum> bands;
    std::vector<double> phases;  // eigenphases of the quantum cat map at theta = 0
    std::vector<std::complex<double>> combined;
};

// Monomials of total degree k in n variables, graded-lex descending
// (x1-exponent most significant). Returned as exponent row vectors.
std::vector<Eigen::VectorXi> monomials(int n, int k);

// Matrix of u -> u o E^{-1} on degree-k homogeneous polynomials.
Eigen::MatrixXd homogeneous_matrix(const Eigen::MatrixXd& e, int k);

std::vector<BandSpectrum> lambda_spectrum(const Eigen::MatrixXd& e, int k_max);

ResonancePrediction predicted_resonances(const CatMap& m, int bigN, int k_max);

}  // namespace pqcat
