use crate::error::{Error, Result};
use crate::exterior::ExtElement;
use crate::planar::OrientedConfiguration;

/// The circles involved in a one-arc configuration.
enum Elementary {
    /// Arc from `x1` to `x2`, merging into `y`.
    Join { x1: u32, x2: u32, y: u32 },
    /// Arc on `w`, splitting into `x1` (start of the dual arc) and `x2`.
    Split { w: u32, x1: u32, x2: u32 },
}

fn elementary(c: &OrientedConfiguration) -> Result<Elementary> {
    if c.n_arcs() != 1 {
        return Err(Error::Dimension(format!("elementary maps need one arc, got {}", c.n_arcs())));
    }
    let (a, b) = (c.start_circle(0), c.end_circle(0));
    let dual = c.dual();
    if a != b {
        let y = dual.start_circle(0);
        Ok(Elementary::Join { x1: a, x2: b, y })
    } else {
        Ok(Elementary::Split { w: a, x1: dual.start_circle(0), x2: dual.end_circle(0) })
    }
}

/// Splits `m = ± l ∧ rest`, returning the sign and `rest`.
fn pull_front(m: &[u32], l: u32) -> Option<(i64, Vec<u32>)> {
    let i = m.iter().position(|&x| x == l)?;
    let mut rest = m.to_vec();
    rest.remove(i);
    Some((if i % 2 == 0 { 1 } else { -1 }, rest))
}

fn wedge_front(front: &[u32], rest: &[u32], c: i64) -> ExtElement {
    let labels: Vec<u32> = front.iter().chain(rest.iter()).copied().collect();
    ExtElement::monomial(&labels, c)
}

/// The elementary map `∂_C` of a one-arc configuration, extended over passive circles.
pub fn elementary_partial(c: &OrientedConfiguration, x: &ExtElement) -> Result<ExtElement> {
    let e = elementary(c)?;
    let mut out = ExtElement::zero();
    for (m, coef) in x.terms() {
        match e {
            Elementary::Join { x1, x2, y } => {
                let has1 = m.contains(&x1);
                let has2 = m.contains(&x2);
                match (has1, has2) {
                    (false, false) => out = out.add(&ExtElement::monomial(m, coef)),
                    (true, true) => {}
                    (true, false) | (false, true) => {
                        let l = if has1 { x1 } else { x2 };
                        let (s, rest) = pull_front(m, l).expect("present");
                        out = out.add(&wedge_front(&[y], &rest, s * coef));
                    }
                }
            }
            Elementary::Split { w, x1, x2 } => match pull_front(m, w) {
                None => {
                    out = out.add(&wedge_front(&[x1], m, coef)).add(&wedge_front(&[x2], m, -coef));
                }
                Some((s, rest)) => out = out.add(&wedge_front(&[x1, x2], &rest, s * coef)),
            },
        }
    }
    Ok(out)
}

/// The elementary homotopy `H_C`: on a join `x1 ∧ x2 ∧ ω ↦ y ∧ ω`, on a split `ω ↦ ω`
/// for `ω` not involving the split circle; zero otherwise.
pub fn elementary_homotopy(c: &OrientedConfiguration, x: &ExtElement) -> Result<ExtElement> {
    let e = elementary(c)?;
    let mut out = ExtElement::zero();
    for (m, coef) in x.terms() {
        match e {
            Elementary::Join { x1, x2, y } => {
                if let Some((s1, r1)) = pull_front(m, x1) {
                    if let Some((s2, r2)) = pull_front(&r1, x2) {
                        out = out.add(&wedge_front(&[y], &r2, s1 * s2 * coef));
                    }
                }
            }
            Elementary::Split { w, .. } => {
                if !m.contains(&w) {
                    out = out.add(&ExtElement::monomial(m, coef));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::{configuration_from_slots, End, Side};

    #[test]
    fn split_and_join_formulas() {
        let split = configuration_from_slots(&[(0, vec![(0, End::Start, Side::Right), (0, End::End, Side::Right)])], 1).unwrap();
        let d = split.dual();
        let (u, v) = (d.start_circle(0), d.end_circle(0));
        let one = ExtElement::one();
        assert_eq!(elementary_partial(&split, &one).unwrap(), ExtElement::generator(u).sub(&ExtElement::generator(v)));
        assert_eq!(
            elementary_partial(&split, &ExtElement::generator(0)).unwrap(),
            ExtElement::monomial(&[u, v], 1)
        );
        assert_eq!(elementary_homotopy(&split, &one).unwrap(), one);

        let join =
            configuration_from_slots(&[(0, vec![(0, End::Start, Side::Right)]), (10, vec![(0, End::End, Side::Left)])], 1)
                .unwrap();
        let y = join.dual().labels()[0];
        assert_eq!(elementary_partial(&join, &ExtElement::generator(10)).unwrap(), ExtElement::generator(y));
        assert!(elementary_partial(&join, &ExtElement::monomial(&[0, 10], 1)).unwrap().is_zero());
        assert_eq!(elementary_homotopy(&join, &ExtElement::monomial(&[0, 10], 1)).unwrap(), ExtElement::generator(y));
        assert!(elementary_partial(&join, &ExtElement::scalar(1)).unwrap() == ExtElement::one());
    }
}
