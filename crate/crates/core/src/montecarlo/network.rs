use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp1};

/// One base station, positioned relative to the UAV's ground projection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaseStation {
    pub x: f64,
    pub y: f64,
    /// Horizontal distance to the UAV.
    pub r: f64,
}

/// A PPP draw on an annulus around the UAV, sorted by distance.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkRealization {
    pub inner_radius: f64,
    pub outer_radius: f64,
    stations: Vec<BaseStation>,
}

impl NetworkRealization {
    /// Homogeneous PPP of intensity `density` on `inner < r <= outer`.
    ///
    /// Distances come out already sorted: `pi * density * r^2` advances by
    /// unit-rate exponential steps, which also makes the point count
    /// Poisson with mean `pi * density * (outer^2 - inner^2)`.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, density: f64, inner: f64, outer: f64) -> Self {
        let scale = PI * density;
        let mut area = scale * inner * inner;
        let limit = scale * outer * outer;
        let mut stations = Vec::with_capacity((limit - area).ceil().max(0.0) as usize + 16);
        loop {
            let step: f64 = Exp1.sample(rng);
            area += step;
            if area > limit {
                break;
            }
            let r = (area / scale).sqrt();
            let phi = rng.random::<f64>() * 2.0 * PI;
            stations.push(BaseStation {
                x: r * phi.cos(),
                y: r * phi.sin(),
                r,
            });
        }
        Self {
            inner_radius: inner,
            outer_radius: outer,
            stations,
        }
    }

    /// A network holding a single BS at horizontal distance `r`.
    pub fn single(r: f64, outer: f64) -> Self {
        Self {
            inner_radius: 0.0,
            outer_radius: outer,
            stations: vec![BaseStation { x: r, y: 0.0, r }],
        }
    }

    pub fn stations(&self) -> &[BaseStation] {
        &self.stations
    }

    pub fn len(&self) -> usize {
        self.stations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stations.is_empty()
    }
}
