use crate::io::ParseError;
use crate::matcher::MatchResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("process `{process}` does not produce recipe `{recipe}`")]
    NotProducing {
        process: String,
        recipe: String,
        result: Box<MatchResult>,
    },

    /// No equipment service in the catalog fulfills a recipe step.
    #[error("producibility failure: no equipment fulfills recipe step `{step}` (service `{service}`)")]
    Producibility { step: String, service: String },

    #[error("unresolved equipment service `{0}`")]
    UnknownEquipmentService(String),

    #[error("degenerate economics for process `{0}`: every attempt is rejected")]
    DegenerateEconomics(String),
}
