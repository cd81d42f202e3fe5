use std::collections::BTreeMap;

use crate::grothendieck_ring::{ClassSymbol, MotivicElement};

use super::components::{ComponentSet, MAX_COMPONENTS};
use super::SncError;

/// Combinatorial data of a strict-normal-crossings divisor `D = Σ D_i` on a
/// smooth scheme of relative dimension `d` over a discrete valuation ring.
///
/// Components are indexed `0..m`. `vertical` is the set `I` of components
/// contained in the special fiber `Y`, which has `r` connected components.
/// `strata[J]` is the class of `D_J° = (∩_{j∈J} D_j) ∖ (∪_{i∉J} D_i)`, with
/// `J = ∅` standing for `Y ∖ D`; missing entries are the zero class.
#[derive(Clone, Debug)]
pub struct SncDivisorData {
    d: u32,
    m: usize,
    r: usize,
    vertical: ComponentSet,
    strata: BTreeMap<ComponentSet, ClassSymbol>,
    fiber_classes: BTreeMap<usize, ClassSymbol>,
}

impl SncDivisorData {
    /// Validates and builds the data. Indices are zero-based.
    ///
    /// When every connected component of `Y` is a divisor component
    /// (`m = |I| = r`), the fiber class `[Y_i]` and the stratum `[D_{i}°]`
    /// describe the same variety; whichever is missing is filled from the
    /// other and a disagreement is an error.
    pub fn new(
        d: u32,
        m: usize,
        r: usize,
        vertical: &[usize],
        strata: Vec<(Vec<usize>, ClassSymbol)>,
        fiber_classes: Vec<(usize, ClassSymbol)>,
    ) -> Result<Self, SncError> {
        if d == 0 {
            return Err(SncError::ZeroRelativeDimension);
        }
        if r == 0 {
            return Err(SncError::NoFiberComponents);
        }
        if m > MAX_COMPONENTS {
            return Err(SncError::TooManyComponents(m));
        }
        let check_index = |i: usize| {
            if i >= m {
                Err(SncError::ComponentOutOfRange { index: i, m })
            } else {
                Ok(())
            }
        };
        for &i in vertical {
            check_index(i)?;
        }
        let vertical_set = ComponentSet::from_indices(vertical.iter().copied());
        if vertical_set.len() != vertical.len() {
            return Err(SncError::DuplicateIndex);
        }
        if vertical_set.len() > r {
            return Err(SncError::TooManyVertical {
                vertical: vertical_set.len(),
                r,
            });
        }
        let check_dim = |what: String, s: &ClassSymbol| match s.finite_dim() {
            Some(dim) if dim > d => Err(SncError::DimensionTooLarge { what, dim, d }),
            _ => Ok(()),
        };
        let mut strata_map = BTreeMap::new();
        for (j, symbol) in strata {
            for &i in &j {
                check_index(i)?;
            }
            let set = ComponentSet::from_indices(j.iter().copied());
            if set.len() != j.len() {
                return Err(SncError::DuplicateIndex);
            }
            check_dim(format!("stratum {set}"), &symbol)?;
            if set.intersection(vertical_set).len() >= 2 && !symbol.is_empty_class() {
                return Err(SncError::VerticalIntersection(set.to_string()));
            }
            if strata_map.insert(set, symbol).is_some() {
                return Err(SncError::DuplicateStratum(set.to_string()));
            }
        }
        let mut fiber_map = BTreeMap::new();
        for (i, symbol) in fiber_classes {
            check_index(i)?;
            if !vertical_set.contains(i) {
                return Err(SncError::FiberClassNotVertical(i + 1));
            }
            check_dim(format!("fiber class {}", i + 1), &symbol)?;
            if fiber_map.insert(i, symbol).is_some() {
                return Err(SncError::DuplicateIndex);
            }
        }
        if m == vertical_set.len() && m == r {
            for i in vertical_set.iter() {
                let key = ComponentSet::singleton(i);
                match (strata_map.get(&key).cloned(), fiber_map.get(&i).cloned()) {
                    (Some(s), Some(f)) if s != f => {
                        return Err(SncError::FiberClassConflict(i + 1));
                    }
                    (Some(s), None) => {
                        fiber_map.insert(i, s);
                    }
                    (None, Some(f)) => {
                        strata_map.insert(key, f);
                    }
                    (None, None) => return Err(SncError::MissingFiberClass(i + 1)),
                    _ => {}
                }
            }
        }
        Ok(SncDivisorData {
            d,
            m,
            r,
            vertical: vertical_set,
            strata: strata_map,
            fiber_classes: fiber_map,
        })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn vertical(&self) -> ComponentSet {
        self.vertical
    }

    /// Components not contained in the special fiber.
    pub fn horizontal(&self) -> ComponentSet {
        ComponentSet::full(self.m).difference(self.vertical)
    }

    pub fn strata(&self) -> &BTreeMap<ComponentSet, ClassSymbol> {
        &self.strata
    }

    pub fn fiber_classes(&self) -> &BTreeMap<usize, ClassSymbol> {
        &self.fiber_classes
    }

    pub fn stratum_symbol(&self, j: ComponentSet) -> Option<&ClassSymbol> {
        self.strata.get(&j)
    }

    /// `[D_J°]`, zero when not supplied.
    pub fn stratum_class(&self, j: ComponentSet) -> MotivicElement {
        self.strata
            .get(&j)
            .map(MotivicElement::symbol)
            .unwrap_or_default()
    }

    /// `[Y_i]` for a vertical component.
    pub fn fiber_class(&self, i: usize) -> Option<MotivicElement> {
        self.fiber_classes.get(&i).map(MotivicElement::symbol)
    }

    pub(crate) fn check_len(&self, n: &[u32]) -> Result<(), SncError> {
        if n.len() != self.m {
            return Err(SncError::LengthMismatch {
                expected: self.m,
                got: n.len(),
            });
        }
        Ok(())
    }
}

/// The components through a point `x` of the special fiber.
///
/// `components` is `I_x`; `vertical_component` is the component of `Y`
/// contained in `D` and passing through `x`, when there is one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointStratumData {
    components: ComponentSet,
    vertical_component: Option<usize>,
}

impl PointStratumData {
    /// Validates `I_x` against `data`. When `vertical_component` is omitted
    /// it is derived as the unique element of `I_x ∩ I`.
    pub fn new(
        data: &SncDivisorData,
        components: &[usize],
        vertical_component: Option<usize>,
    ) -> Result<Self, SncError> {
        for &i in components {
            if i >= data.m() {
                return Err(SncError::ComponentOutOfRange {
                    index: i,
                    m: data.m(),
                });
            }
        }
        let set = ComponentSet::from_indices(components.iter().copied());
        if set.is_empty() {
            return Err(SncError::InconsistentPoint(
                "a point must lie on at least one component".into(),
            ));
        }
        if set.len() != components.len() {
            return Err(SncError::DuplicateIndex);
        }
        let on_vertical = set.intersection(data.vertical());
        if on_vertical.len() > 1 {
            return Err(SncError::InconsistentPoint(format!(
                "point lies on several vertical components {on_vertical}"
            )));
        }
        let derived = on_vertical.iter().next();
        if let Some(v) = vertical_component {
            if Some(v) != derived {
                return Err(SncError::InconsistentPoint(format!(
                    "vertical component {} is not the vertical component through the point",
                    v + 1
                )));
            }
        }
        if data.vertical().len() == data.r() && derived.is_none() {
            return Err(SncError::InconsistentPoint(
                "every fiber component lies in D, so the point must lie on a vertical component"
                    .into(),
            ));
        }
        if data.m() == data.vertical().len() && data.m() == data.r() && set.len() != 1 {
            return Err(SncError::InconsistentPoint(
                "when D is the special fiber a point lies on exactly one component".into(),
            ));
        }
        Ok(PointStratumData {
            components: set,
            vertical_component: derived,
        })
    }

    pub fn components(&self) -> ComponentSet {
        self.components
    }

    pub fn vertical_component(&self) -> Option<usize> {
        self.vertical_component
    }
}
