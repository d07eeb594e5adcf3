#pragma once

namespace mmit {

/// a*mu^2 + b*mu + c
struct PieceCoefficients {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    double operator()(double mu) const { return (a * mu + b) * mu + c; }
    double slope(double mu) const { return 2.0 * a * mu + b; }
    bool is_constant() const { return a == 0.0 && b == 0.0; }

    PieceCoefficients& operator+=(const PieceCoefficients& o) {
        a += o.a;
        b += o.b;
        c += o.c;
        return *this;
    }
    PieceCoefficients& operator-=(const PieceCoefficients& o) {
        a -= o.a;
        b -= o.b;
        c -= o.c;
        return *this;
    }
    friend PieceCoefficients operator+(PieceCoefficients l, const PieceCoefficients& r) { return l += r; }
    friend PieceCoefficients operator-(PieceCoefficients l, const PieceCoefficients& r) { return l -= r; }
    friend bool operator==(const PieceCoefficients&, const PieceCoefficients&) = default;
};

}  // namespace mmit
