//! Worker pool sizing.

use crate::error::{LemniError, Result};

pub const THREADS_ENV: &str = "LEMNIKIT_THREADS";

/// Size the global rayon pool from `explicit`, else `LEMNIKIT_THREADS`, else
/// the number of available cores. Returns the size actually in effect; if the
/// pool was already built the existing size wins.
pub fn configure_threads(explicit: Option<usize>) -> Result<usize> {
    let requested = match explicit {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV) {
            Ok(s) if !s.trim().is_empty() => Some(s.trim().parse::<usize>().map_err(|_| {
                LemniError::InvalidArgument(format!("{THREADS_ENV}={s:?} is not a thread count"))
            })?),
            _ => None,
        },
    };
    if requested == Some(0) {
        return Err(LemniError::InvalidArgument("thread count must be >= 1".into()));
    }
    if let Some(n) = requested {
        if rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            log::debug!("rayon pool already initialised; keeping {} threads", rayon::current_num_threads());
        }
    }
    Ok(rayon::current_num_threads())
}
