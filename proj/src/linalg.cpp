#include "qonn/linalg.hpp"

#include <cmath>

namespace qonn {

int matrix_rank(CMat<double> m, double tol) {
    int rank = 0;
    int row = 0;
    for (int col = 0; col < m.cols && row < m.rows; ++col) {
        int piv = row;
        double best = 0.0;
        for (int i = row; i < m.rows; ++i) {
            double mag = std::sqrt(norm_sq(m(i, col)));
            if (mag > best) {
                best = mag;
                piv = i;
            }
        }
        if (best < tol) continue;
        if (piv != row)
            for (int j = 0; j < m.cols; ++j) std::swap(m(row, j), m(piv, j));
        for (int i = row + 1; i < m.rows; ++i) {
            cxd f = m(i, col) / m(row, col);
            for (int j = col; j < m.cols; ++j) m(i, j) -= f * m(row, j);
        }
        ++row;
        ++rank;
    }
    return rank;
}

}  // namespace qonn
