//! Affine point counts by enumeration.

use super::table::ResidueTable;
use super::FieldSpec;
use crate::arith::ntheory::gcd;
use crate::curve::WeilCurve;
use crate::error::Result;

/// `#{(x, y) in F^2 : y^e = gamma x^f + delta}`.
///
/// Uses `#{x : x^f = w} = gcd(f, Q-1)` when `w` is a nonzero power of that
/// order, 1 when `w = 0`, and 0 otherwise (and likewise for `y`), so that the
/// count is one pass over `w` with `v = gamma w + delta`.
pub fn count_affine_points(curve: &WeilCurve, field: &FieldSpec) -> Result<u64> {
    let (gamma, delta) = curve.reduce(field.p())?;
    let q = field.size();
    let ep = gcd(curve.e() as u64, q - 1);
    let fp = gcd(curve.f() as u64, q - 1);
    let m = ep * fp;
    if m == 1 {
        return Ok(q);
    }
    let table = ResidueTable::build(field, m as u32)?;
    let pairs = table.pair_counts(field, gamma, delta)?;
    let width = m as usize + 1;
    let weight = |res: usize, order: u64| -> u64 {
        if res == m as usize {
            1
        } else if res as u64 % order == 0 {
            order
        } else {
            0
        }
    };
    let mut total = 0u64;
    for a in 0..width {
        let wa = weight(a, fp);
        if wa == 0 {
            continue;
        }
        for b in 0..width {
            let c = pairs[a * width + b];
            if c != 0 {
                total += c * wa * weight(b, ep);
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(curve: &WeilCurve, field: &FieldSpec) -> u64 {
        let (g, d) = curve.reduce(field.p()).unwrap();
        let q = field.size();
        let mut count = 0;
        for x in 0..q {
            let rhs = field.add(field.mul(g, field.pow(x, curve.f() as u64)), d);
            for y in 0..q {
                if field.pow(y, curve.e() as u64) == rhs {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn examples() {
        let c = WeilCurve::with_integers(2, 5, 1, 1).unwrap();
        assert_eq!(
            count_affine_points(&c, &FieldSpec::build(3, 1, 1 << 20).unwrap()).unwrap(),
            3
        );
        assert_eq!(
            count_affine_points(&c, &FieldSpec::build(7, 1, 1 << 20).unwrap()).unwrap(),
            7
        );
        let c = WeilCurve::with_integers(2, 3, 1, 1).unwrap();
        assert_eq!(
            count_affine_points(&c, &FieldSpec::build(5, 1, 1 << 20).unwrap()).unwrap(),
            5
        );
    }

    #[test]
    fn matches_pair_enumeration() {
        let curves = [
            WeilCurve::with_integers(2, 5, 1, 1).unwrap(),
            WeilCurve::with_integers(3, 4, 1, 2).unwrap(),
            WeilCurve::with_integers(2, 9, 3, 1).unwrap(),
            WeilCurve::with_integers(3, 5, 2, 7).unwrap(),
        ];
        for c in &curves {
            for (p, r) in [(7u64, 1u32), (11, 1), (13, 1), (7, 2), (11, 2), (13, 2)] {
                if c.reduce(p).is_err() {
                    continue;
                }
                let f = FieldSpec::build(p, r, 1 << 20).unwrap();
                assert_eq!(
                    count_affine_points(c, &f).unwrap(),
                    brute(c, &f),
                    "{c} over {p}^{r}"
                );
            }
        }
    }

    #[test]
    fn bad_reduction() {
        let c = WeilCurve::with_integers(2, 5, 1, 1).unwrap();
        assert!(count_affine_points(&c, &FieldSpec::build(5, 1, 1 << 20).unwrap()).is_err());
    }
}
