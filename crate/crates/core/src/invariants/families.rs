use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::grouphom::{Coefficients, FamilyCocycle, RelativeCocycle3};
use crate::quandle::FiniteQuandle;

use super::CochainTable;

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

fn pow_mod(x: i64, e: u64, p: u64) -> i64 {
    let p = p as i64;
    let mut base = x.rem_euclid(p);
    let mut acc = 1 % p;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

fn is_power_of(e: u64, p: u64) -> bool {
    let mut e = e;
    while e > 1 && e % p == 0 {
        e /= p;
    }
    e == 1
}

/// `φ(x,y,z) = (x−y)^{q₁} (y−z)^{q₂+q₃} z^{q₄}` over `𝔽_p`, as a cochain on the
/// dihedral quandle `R_p`.
/// Each exponent must be a power of `p`.
pub fn mochizuki_cocycle(q: u64, exponents: [u64; 4]) -> Result<CochainTable> {
    if q == 2 || !is_prime(q) {
        return Err(Error::Field(format!("q = {q} must be an odd prime")));
    }
    if let Some(&e) = exponents.iter().find(|&&e| !is_power_of(e, q)) {
        return Err(Error::BadExponent(e));
    }
    let [q1, q2, q3, q4] = exponents;
    let p = q as usize;
    Ok(CochainTable::from_fn(3, p, q, |t| {
        let (x, y, z) = (t[0] as i64, t[1] as i64, t[2] as i64);
        pow_mod(x - y, q1, q) * pow_mod(y - z, q2 + q3, q) % q as i64 * pow_mod(z, q4, q)
    }))
}

/// `ψ(x,y,z) = c·xyz` on `M = 𝔽_p`; every trilinear form on `𝔽_p` has this shape.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrilinearForm {
    pub p: u64,
    pub c: i64,
}

impl TrilinearForm {
    pub fn eval(&self, x: i64, y: i64, z: i64) -> i64 {
        let p = self.p as i64;
        (self.c.rem_euclid(p) * x.rem_euclid(p) % p * y.rem_euclid(p) % p * z.rem_euclid(p)).rem_euclid(p)
    }
}

/// The two pullbacks of an invariant trilinear form.
#[derive(Clone, Debug)]
pub struct MultilinearCocycles {
    /// `X = M × O` with `(a,g)◁(b,h) = ((a−b)h + b, h⁻¹gh)`; element
    /// `(a, O[i])` has index `a·|O| + i`.
    pub quandle: FiniteQuandle,
    pub points: Vec<(i64, i64)>,
    /// `ψ((a₁−a₂)(1−z₂), a₂−a₃, a₃−a₃z₃⁻¹)`.
    pub quandle_cocycle: CochainTable,
    /// `G = M ⋊ H` with `(a,g)(b,h) = (ah+b, gh)`; `(a, H[i])` has index `a·|H| + i`.
    pub group: GroupTable,
    /// `K = {(y(c−1), c) : c ∈ H}`.
    pub subgroup: Vec<usize>,
    /// `θ` as below with `η = 0`.
    pub group_cocycle: RelativeCocycle3,
}

/// Builds both cocycles for `M = 𝔽_p` acted on by the unit group `H`, the orbit
/// set `O ⊂ H` and the parameter `y ∈ M`. The group-side formula is
/// `θ((a₁,g₁),(a₂,g₂),(a₃,g₃)) = ψ((a₁+y−yg₁)g₂g₃, (a₂+y−yg₂)g₃, a₃+y−yg₃)`.
pub fn multilinear_cocycles(psi: TrilinearForm, h: &[i64], o: &[i64], y: i64) -> Result<MultilinearCocycles> {
    let p = psi.p;
    if !is_prime(p) {
        return Err(Error::Field(format!("{p} is not prime")));
    }
    let pi = p as i64;
    let norm = |x: i64| x.rem_euclid(pi);
    let h: Vec<i64> = h.iter().map(|&x| norm(x)).collect();
    let pos = |x: i64| h.iter().position(|&g| g == norm(x));
    if h.iter().any(|&g| g == 0) || h.iter().any(|&a| h.iter().any(|&b| pos(a * b).is_none())) {
        return Err(Error::InvalidGroup("H is not a subgroup of the units".into()));
    }
    if o.iter().any(|&g| pos(g).is_none()) {
        return Err(Error::InvalidGroup("O must lie in H".into()));
    }
    // ψ(xg, yg, zg) = g³ψ(x, y, z), so the unit vector decides
    if let Some(&g) = h.iter().find(|&&g| psi.eval(g, g, g) != psi.eval(1, 1, 1)) {
        return Err(Error::NotInvariant(g as usize));
    }
    let inv = |g: i64| h.iter().copied().find(|&x| norm(x * g) == 1).expect("H is a group");

    let points: Vec<(i64, i64)> = (0..pi).flat_map(|a| o.iter().map(move |&g| (a, norm(g)))).collect();
    let idx = |(a, g): (i64, i64)| points.iter().position(|&q| q == (norm(a), norm(g))).expect("closed");
    let n = points.len();
    let table: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let ((a, g), (b, hh)) = (points[i], points[j]);
                    idx(((a - b) * hh + b, g))
                })
                .collect()
        })
        .collect();
    let quandle = FiniteQuandle::from_table(table)?;
    let quandle_cocycle = CochainTable::from_fn(3, n, p, |t| {
        let ((a1, _), (a2, z2), (a3, z3)) = (points[t[0]], points[t[1]], points[t[2]]);
        psi.eval((a1 - a2) * (1 - z2), a2 - a3, a3 - a3 * inv(z3))
    });

    let elems: Vec<(i64, i64)> = (0..pi).flat_map(|a| h.iter().map(move |&g| (a, g))).collect();
    let gidx = |(a, g): (i64, i64)| norm(a) as usize * h.len() + pos(g).expect("in H");
    let group = GroupTable::from_elements(&elems, |&(a, g), &(b, hh)| (norm(a * hh + b), norm(g * hh)))?;
    let subgroup: Vec<usize> = {
        let mut k: Vec<usize> = h.iter().map(|&c| gidx((y * (c - 1), c))).collect();
        k.sort_unstable();
        k
    };
    let gn = elems.len();
    let mut theta = vec![0; gn * gn * gn];
    for (i1, &(a1, g1)) in elems.iter().enumerate() {
        for (i2, &(a2, g2)) in elems.iter().enumerate() {
            for (i3, &(a3, g3)) in elems.iter().enumerate() {
                theta[(i1 * gn + i2) * gn + i3] =
                    psi.eval((a1 + y - y * g1) * g2 * g3, (a2 + y - y * g2) * g3, a3 + y - y * g3);
            }
        }
    }
    let group_cocycle = RelativeCocycle3 {
        coefficients: Coefficients::trivial(p),
        families: vec![FamilyCocycle { subgroup: subgroup.clone(), theta, eta: Default::default() }],
    };
    Ok(MultilinearCocycles { quandle, points, quandle_cocycle, group, subgroup, group_cocycle })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::check_quandle_3cocycle;

    #[test]
    fn mochizuki_values() {
        let t = mochizuki_cocycle(3, [1, 1, 1, 1]).unwrap();
        assert_eq!(t.get(&[0, 1, 2]).unwrap(), 1);
        for x in 0..3 {
            for z in 0..3 {
                assert_eq!(t.get(&[x, x, z]).unwrap(), 0);
            }
        }
        assert!(matches!(mochizuki_cocycle(3, [1, 2, 1, 1]), Err(Error::BadExponent(2))));
        assert!(mochizuki_cocycle(9, [1, 1, 1, 1]).is_err());
    }

    #[test]
    fn mochizuki_is_a_cocycle_for_p_powers() {
        for (p, e) in [(3, [1, 3, 1, 9]), (5, [1, 1, 5, 1]), (7, [1, 1, 1, 1])] {
            let x = FiniteQuandle::dihedral(p as usize).unwrap();
            let t = mochizuki_cocycle(p, e).unwrap();
            assert_eq!(check_quandle_3cocycle(&x, &t).unwrap(), None, "p = {p}");
        }
    }

    #[test]
    fn multilinear_f7() {
        let m = multilinear_cocycles(TrilinearForm { p: 7, c: 1 }, &[1, 2, 4], &[2, 4], 3).unwrap();
        assert_eq!(m.quandle.size(), 14);
        assert_eq!(check_quandle_3cocycle(&m.quandle, &m.quandle_cocycle).unwrap(), None);
        assert_eq!(m.group.size(), 21);
        assert_eq!(m.group_cocycle.check(&m.group).unwrap(), None);
    }

    #[test]
    fn multilinear_edge_cases() {
        let z = multilinear_cocycles(TrilinearForm { p: 7, c: 0 }, &[1, 2, 4], &[2], 1).unwrap();
        assert!(z.quandle_cocycle.to_json()["values"].as_array().unwrap().iter().all(|v| v == 0));
        let t = multilinear_cocycles(TrilinearForm { p: 3, c: 1 }, &[1], &[1], 0).unwrap();
        assert_eq!(check_quandle_3cocycle(&t.quandle, &t.quandle_cocycle).unwrap(), None);
        assert!(matches!(
            multilinear_cocycles(TrilinearForm { p: 7, c: 1 }, &[1, 2, 3, 4, 5, 6], &[3], 0),
            Err(Error::NotInvariant(_))
        ));
    }
}
