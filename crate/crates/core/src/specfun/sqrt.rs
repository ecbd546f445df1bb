use crate::{Error, Result, C64};

/// Square root with the cut on `[0, +∞)` and `arg ∈ (0, π]`, so `√-1 = i`.
///
/// On the cut itself the value from below is returned (`√4 = -2`).
pub fn cut_sqrt(w: C64) -> C64 {
    let s = w.sqrt();
    if s.im > 0.0 || (s.im == 0.0 && s.re < 0.0) {
        s
    } else if s.im == 0.0 && s.re == 0.0 {
        C64::new(0.0, 0.0)
    } else {
        -s
    }
}

/// Square root followed by continuity along a path.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BranchedSqrtState {
    pub previous_value: C64,
    pub initialized: bool,
}

impl BranchedSqrtState {
    pub fn new() -> Self {
        Self::default()
    }

    /// State already sitting on the root `previous`.
    pub fn starting_at(previous: C64) -> Self {
        Self {
            previous_value: previous,
            initialized: true,
        }
    }

    pub fn next(&mut self, w: C64) -> Result<C64> {
        branched_sqrt(w, self)
    }
}

/// First call uses [`cut_sqrt`] and rejects `w ∈ [0, +∞)`; later calls
/// pick the root nearer the previous value.
pub fn branched_sqrt(w: C64, state: &mut BranchedSqrtState) -> Result<C64> {
    let r = if state.initialized {
        let s = w.sqrt();
        if (s - state.previous_value).norm() <= (s + state.previous_value).norm() {
            s
        } else {
            -s
        }
    } else {
        if w.im == 0.0 && w.re >= 0.0 {
            return Err(Error::BranchCut { re: w.re, im: w.im });
        }
        cut_sqrt(w)
    };
    state.previous_value = r;
    state.initialized = true;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;
    use proptest::prelude::*;

    #[test]
    fn minus_one_gives_i() {
        let mut st = BranchedSqrtState::new();
        assert_eq!(branched_sqrt(C64::new(-1.0, 0.0), &mut st).unwrap(), C64::new(0.0, 1.0));
        assert!(st.initialized);
    }

    #[test]
    fn continuity_selects_nearer_root() {
        let mut st = BranchedSqrtState::starting_at(C64::new(-2.0, 0.1));
        assert_eq!(branched_sqrt(C64::new(4.0, 0.0), &mut st).unwrap(), C64::new(-2.0, 0.0));
    }

    #[test]
    fn cut_rejected_when_uninitialized() {
        let mut st = BranchedSqrtState::new();
        assert!(matches!(
            branched_sqrt(C64::new(2.0, 0.0), &mut st),
            Err(Error::BranchCut { .. })
        ));
        assert!(!st.initialized);
    }

    #[test]
    fn unit_circle_path_has_no_jump() {
        let mut st = BranchedSqrtState::new();
        let steps = 400;
        let mut prev: Option<C64> = None;
        for i in 0..=steps {
            let t = PI / 2.0 + PI * i as f64 / steps as f64;
            let r = branched_sqrt(C64::from_polar(1.0, t), &mut st).unwrap();
            if let Some(p) = prev {
                assert!((r - p).norm() < (r + p).norm());
                assert!((r - p).norm() < 0.01);
            }
            prev = Some(r);
        }
    }

    #[test]
    fn cut_sqrt_arg_range() {
        for w in [C64::new(-1.0, 0.0), C64::new(0.0, -1.0), C64::new(1.0, 1e-300), C64::new(3.0, -2.0)] {
            let s = cut_sqrt(w);
            let a = s.arg();
            assert!(a > 0.0 && a <= PI, "{w} -> {s}");
        }
    }

    proptest! {
        #[test]
        fn squares_back(re in -1e3f64..1e3, im in -1e3f64..1e3, pre in -1e3f64..1e3, pim in -1e3f64..1e3) {
            let w = C64::new(re, im);
            prop_assume!(w.norm() > 1e-6);
            let mut st = BranchedSqrtState::starting_at(C64::new(pre, pim));
            let r = branched_sqrt(w, &mut st).unwrap();
            prop_assert!((r * r - w).norm() <= 4.0 * f64::EPSILON * w.norm());
            let p = cut_sqrt(w);
            prop_assert!((p * p - w).norm() <= 4.0 * f64::EPSILON * w.norm());
        }
    }
}
