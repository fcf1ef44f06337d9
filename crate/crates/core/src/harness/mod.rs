//! Plants, data windows, the batch least-squares baseline and trajectory files.

mod baseline;
mod csv_io;
mod plant;
mod window;

pub use baseline::{batch_ls_from_data, batch_ls_model_set};
pub use csv_io::{read_trajectory, write_trajectory};
pub use plant::{
    discretize, five_state_benchmark, simulate, CstrParams, DriftSpec, LtvPlantSpec, MatrixSpec,
    NoiseSampling, Plant, PlantSpec, Trajectory,
};
pub use window::{SlidingWindow, Transition};
