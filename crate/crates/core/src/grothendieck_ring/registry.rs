use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use super::RingError;

static NEXT_REGISTRY: AtomicU64 = AtomicU64::new(1);

/// Identity of a [`SymbolRegistry`]; elements remember which registry their
/// symbols came from so that unrelated symbol spaces are never mixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RegistryId(u64);

/// Dimension attached to a class symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolDim {
    /// The class of the empty variety; the symbol evaluates to zero.
    Empty,
    Finite(u32),
}

/// A declared variety class `[S]`.
///
/// Ordering and equality look at the name first, which is unique inside one
/// registry.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassSymbol {
    name: Arc<str>,
    dim: SymbolDim,
    registry: RegistryId,
}

impl ClassSymbol {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> SymbolDim {
        self.dim
    }

    /// Dimension as an integer, `None` for the empty class.
    pub fn finite_dim(&self) -> Option<u32> {
        match self.dim {
            SymbolDim::Empty => None,
            SymbolDim::Finite(d) => Some(d),
        }
    }

    pub fn is_empty_class(&self) -> bool {
        self.dim == SymbolDim::Empty
    }

    pub fn registry(&self) -> RegistryId {
        self.registry
    }
}

impl fmt::Display for ClassSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.name)
    }
}

/// Append-only table of class symbols.
#[derive(Debug)]
pub struct SymbolRegistry {
    id: RegistryId,
    symbols: BTreeMap<String, ClassSymbol>,
}

impl Default for SymbolRegistry {
    fn default() -> Self {
        Self::new()
    }
}

impl SymbolRegistry {
    pub fn new() -> Self {
        SymbolRegistry {
            id: RegistryId(NEXT_REGISTRY.fetch_add(1, Ordering::Relaxed)),
            symbols: BTreeMap::new(),
        }
    }

    pub fn id(&self) -> RegistryId {
        self.id
    }

    /// Declares a symbol of dimension `dim`.
    pub fn declare_symbol(&mut self, name: &str, dim: i64) -> Result<ClassSymbol, RingError> {
        if dim < 0 {
            return Err(RingError::NegativeDimension {
                name: name.to_string(),
                dim,
            });
        }
        let dim = u32::try_from(dim).map_err(|_| RingError::DimensionTooLarge(dim))?;
        self.insert(name, SymbolDim::Finite(dim))
    }

    /// Declares a symbol standing for the empty variety (the zero class).
    pub fn declare_empty(&mut self, name: &str) -> Result<ClassSymbol, RingError> {
        self.insert(name, SymbolDim::Empty)
    }

    fn insert(&mut self, name: &str, dim: SymbolDim) -> Result<ClassSymbol, RingError> {
        if name.is_empty() {
            return Err(RingError::EmptyName);
        }
        if self.symbols.contains_key(name) {
            return Err(RingError::DuplicateSymbol(name.to_string()));
        }
        let symbol = ClassSymbol {
            name: Arc::from(name),
            dim,
            registry: self.id,
        };
        self.symbols.insert(name.to_string(), symbol.clone());
        Ok(symbol)
    }

    pub fn get(&self, name: &str) -> Result<ClassSymbol, RingError> {
        self.symbols
            .get(name)
            .cloned()
            .ok_or_else(|| RingError::UnknownSymbol(name.to_string()))
    }

    /// Returns the existing symbol if it was declared with the same dimension,
    /// declares it otherwise.
    pub fn get_or_declare(&mut self, name: &str, dim: SymbolDim) -> Result<ClassSymbol, RingError> {
        match self.symbols.get(name) {
            Some(existing) if existing.dim == dim => Ok(existing.clone()),
            Some(_) => Err(RingError::DuplicateSymbol(name.to_string())),
            None => self.insert(name, dim),
        }
    }

    pub fn symbols(&self) -> impl Iterator<Item = &ClassSymbol> {
        self.symbols.values()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}
