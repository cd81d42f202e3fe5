//! Disjoint decomposition of a quantifier-free formula into cubes, i.e.
//! conjunctions of inequalities and congruences, by branching on atoms.

use crate::presburger::formula::negate_ge;
use crate::presburger::{Formula, LinearForm, PresburgerError};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct Cube {
    pub ges: Vec<LinearForm>,
    pub mods: Vec<(LinearForm, u64)>,
}

impl Cube {
    #[cfg(test)]
    pub fn to_formula(&self) -> Formula {
        let mut parts: Vec<Formula> = self.ges.iter().cloned().map(Formula::Ge).collect();
        parts.extend(self.mods.iter().map(|(l, d)| Formula::Mod(l.clone(), *d)));
        Formula::And(parts)
    }
}

/// Cubes whose union is the solution set of `f`; distinct cubes are
/// disjoint.
pub(crate) fn cubes(f: &Formula) -> Result<Vec<Cube>, PresburgerError> {
    let mut out = Vec::new();
    split(f.nnf()?, Cube::default(), &mut out)?;
    Ok(out)
}

fn split(f: Formula, mut cube: Cube, out: &mut Vec<Cube>) -> Result<(), PresburgerError> {
    let mut f = f.simplify()?;
    // conjunct atoms hold in every branch
    loop {
        let atoms: Vec<Formula> = match &f {
            Formula::And(gs) => gs
                .iter()
                .filter(|g| matches!(g, Formula::Ge(_) | Formula::Mod(..)))
                .cloned()
                .collect(),
            g @ (Formula::Ge(_) | Formula::Mod(..)) => vec![g.clone()],
            _ => Vec::new(),
        };
        if atoms.is_empty() {
            break;
        }
        for a in atoms {
            f = assign(&f, &a, true)?.simplify()?;
            match a {
                Formula::Ge(l) => cube.ges.push(l),
                Formula::Mod(l, d) => cube.mods.push((l, d)),
                _ => unreachable!(),
            }
        }
    }
    match f {
        Formula::False => Ok(()),
        Formula::True => {
            out.push(cube);
            Ok(())
        }
        _ => {
            let atom = first_atom(&f).expect("non-constant formula has an atom");
            match &atom {
                Formula::Ge(l) => {
                    let mut yes = cube.clone();
                    yes.ges.push(l.clone());
                    split(assign(&f, &atom, true)?, yes, out)?;
                    let mut no = cube;
                    no.ges.push(negate_ge(l)?);
                    split(assign(&f, &atom, false)?, no, out)
                }
                Formula::Mod(l, d) => {
                    for rho in 0..*d {
                        let shifted = l.checked_add_constant(-(rho as i64))?;
                        let branch_atom = Formula::Mod(shifted.clone(), *d);
                        let mut c = cube.clone();
                        c.mods.push((shifted, *d));
                        split(assign(&f, &branch_atom, true)?, c, out)?;
                    }
                    Ok(())
                }
                _ => unreachable!(),
            }
        }
    }
}

fn first_atom(f: &Formula) -> Option<Formula> {
    match f {
        Formula::Ge(_) | Formula::Mod(..) => Some(f.clone()),
        Formula::Not(g) => first_atom(g),
        Formula::And(gs) | Formula::Or(gs) => gs.iter().find_map(first_atom),
        _ => None,
    }
}

/// Replaces atoms whose value is fixed once `atom` has truth value `value`.
fn assign(f: &Formula, atom: &Formula, value: bool) -> Result<Formula, PresburgerError> {
    let truth = |b: bool| if b { Formula::True } else { Formula::False };
    f.map_atoms(&mut |a| {
        Ok(match (atom, a) {
            (Formula::Ge(l), Formula::Ge(m)) => {
                if m == l {
                    truth(value)
                } else if *m == negate_ge(l)? {
                    truth(!value)
                } else {
                    a.clone()
                }
            }
            (Formula::Mod(l, d), Formula::Mod(m, e)) if d == e && value => {
                // m ≡ (m - l) mod d when l ≡ 0
                let diff = m.checked_sub(l)?;
                if diff.is_constant() {
                    truth(diff.constant_term().rem_euclid(*d as i64) == 0)
                } else {
                    a.clone()
                }
            }
            (Formula::Mod(l, d), Formula::Mod(m, e)) if d == e && m == l => truth(false),
            _ => a.clone(),
        })
    })
}
