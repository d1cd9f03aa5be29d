//! Published error tables used as reference targets by the acceptance run,
//! plus the comparison helpers that go with them.

/// Max-norm errors of one scheme over a refinement sequence, with the
/// observed orders printed next to them (one fewer than the grids).
#[derive(Clone, Copy, Debug)]
pub struct Table {
    pub grids: &'static [usize],
    pub err_max: &'static [f64],
    pub orders: &'static [f64],
}

/// P1, l = 7, new scheme.
pub const P1_NEW: Table = Table {
    grids: &[16, 32, 64, 128],
    err_max: &[1.32e-4, 1.04e-6, 2.55e-8, 4.33e-10],
    orders: &[6.99, 5.34, 5.88],
};

/// P1, l = 7, baseline scheme.
pub const P1_BASELINE: Table = Table {
    grids: &[16, 32, 64, 128],
    err_max: &[2.00e-3, 2.43e-5, 3.58e-7, 5.54e-9],
    orders: &[6.36, 6.09, 6.02],
};

/// P3, K = 30, new scheme.
pub const P3_NEW: Table = Table {
    grids: &[32, 64, 128],
    err_max: &[9.3715e-2, 6.7252e-4, 8.7385e-6],
    orders: &[7.12, 6.27],
};

/// P3, K = 30, baseline scheme.
pub const P3_BASELINE: Table = Table {
    grids: &[32, 64, 128],
    err_max: &[1.0534e-1, 7.4942e-4, 9.7186e-6],
    orders: &[7.14, 6.27],
};

/// P2, l = 7, new scheme.
pub const P2_NEW: Table = Table {
    grids: &[16, 32, 64],
    err_max: &[1.42e-3, 1.11e-5, 2.74e-7],
    orders: &[6.99, 5.34],
};

/// P5, l = 9, new scheme.
pub const P5_NEW: Table = Table {
    grids: &[16, 32, 64],
    err_max: &[5.20e-3, 2.69e-5, 2.95e-7],
    orders: &[7.59, 6.51],
};

/// P7, K = 12, zeta = (6, 8, 7), new scheme.
pub const P7_NEW: Table = Table {
    grids: &[8, 16, 32],
    err_max: &[7.44e-3, 4.83e-5, 5.30e-7],
    orders: &[7.27, 6.51],
};

/// `got` lies within a factor `factor` of `want` (both positive).
pub fn within_factor(got: f64, want: f64, factor: f64) -> bool {
    got > 0.0 && want > 0.0 && got <= factor * want && got * factor >= want
}

/// log2 ratios of consecutive errors.
pub fn orders(errs: &[f64]) -> Vec<f64> {
    errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_is_symmetric() {
        assert!(within_factor(2.0, 1.0, 2.0));
        assert!(within_factor(0.5, 1.0, 2.0));
        assert!(!within_factor(2.01, 1.0, 2.0));
        assert!(!within_factor(0.49, 1.0, 2.0));
        assert!(!within_factor(0.0, 1.0, 2.0));
    }

    #[test]
    fn printed_orders_follow_printed_errors() {
        for t in [P1_NEW, P1_BASELINE, P3_NEW, P3_BASELINE, P2_NEW, P5_NEW] {
            assert_eq!(t.grids.len(), t.err_max.len());
            for (got, want) in orders(t.err_max).iter().zip(t.orders) {
                assert!((got - want).abs() < 0.02, "{got} vs {want}");
            }
        }
    }
}
