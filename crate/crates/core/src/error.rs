use thiserror::Error;

use crate::constants::ConstantsError;
use crate::ivp::IvpError;
use crate::manifold::ManifoldError;
use crate::phase::PhaseError;
use crate::picard::PicardError;
use crate::profile::ProfileError;
use crate::shooting::ShootingError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Integration(#[from] IvpError),
    #[error(transparent)]
    Shooting(#[from] ShootingError),
    #[error(transparent)]
    Manifold(#[from] ManifoldError),
    #[error(transparent)]
    Picard(#[from] PicardError),
    #[error(transparent)]
    Constants(#[from] ConstantsError),
    #[error(transparent)]
    Phase(#[from] PhaseError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
}
