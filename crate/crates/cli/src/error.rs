use motivic_core::grothendieck_ring::RingError;
use motivic_core::input::InputError;
use motivic_core::presburger::PresburgerError;
use motivic_core::rational_series::SeriesError;
use motivic_core::semialg_eval::SemialgError;
use motivic_core::snc_zeta::SncError;
use motivic_core::specialization::SpecializationError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Snc(#[from] SncError),
    #[error(transparent)]
    Specialization(#[from] SpecializationError),
    #[error(transparent)]
    Presburger(#[from] PresburgerError),
    #[error(transparent)]
    Semialg(#[from] SemialgError),
}

fn series_diverges(e: &SeriesError) -> bool {
    matches!(e, SeriesError::DivergentSubstitution(_))
}

impl CliError {
    /// 3 for divergent series and infinite fibers, 2 for everything else.
    pub fn exit_code(&self) -> u8 {
        let divergent = match self {
            CliError::Snc(SncError::Series(e)) => series_diverges(e),
            CliError::Specialization(e) => match e {
                SpecializationError::InfiniteFiber(_) => true,
                SpecializationError::Series(e) => series_diverges(e),
                SpecializationError::Snc(SncError::Series(e)) => series_diverges(e),
                _ => false,
            },
            CliError::Input(InputError::Specialization(SpecializationError::InfiniteFiber(_))) => {
                true
            }
            CliError::Presburger(PresburgerError::InfiniteFiber(_)) => true,
            _ => false,
        };
        if divergent {
            3
        } else {
            2
        }
    }
}
