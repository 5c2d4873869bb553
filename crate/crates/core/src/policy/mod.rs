//! Policy-gradient learner: a Gaussian policy whose mean is an MLP, trained by
//! REINFORCE with a scalar baseline and Adam.

mod adam;
mod checkpoint;
mod env;
mod gaussian;
mod mlp;
mod train;

pub use adam::{AdamConfig, AdamState};
pub use checkpoint::Checkpoint;
pub use env::{compute_returns, rollout, step_reward, Environment, EpisodeTrace, PolicyInput};
pub use gaussian::{action_dim, action_to_control, log_policy, log_policy_gradient, policy_mean, sample_action, SampledAction};
pub use mlp::{Activations, PolicyParameters};
pub use train::{
    train, BaselineRule, BaselineState, CurvePoint, PolicyConfig, Trainer, TrainingOutcome, UpdateSchedule,
};
