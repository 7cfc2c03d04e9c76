//! Failure times (days) of the two motors in each of 18 parallel two-motor
//! systems, a standard load-sharing reliability example.
//!
//! Rows 11 and 12 share a first failure at day 212 and two second failures
//! coincide with first failures of other systems, so fits use
//! [`TiePolicy::SharedRiskSet`](crate::ranks::TiePolicy::SharedRiskSet).

use crate::data::DataMatrix;

pub const MOTORS: [[f64; 2]; 18] = [
    [65.0, 102.0],
    [84.0, 148.0],
    [88.0, 202.0],
    [121.0, 156.0],
    [123.0, 148.0],
    [139.0, 150.0],
    [156.0, 245.0],
    [172.0, 235.0],
    [192.0, 220.0],
    [207.0, 214.0],
    [212.0, 250.0],
    [212.0, 220.0],
    [213.0, 265.0],
    [220.0, 275.0],
    [243.0, 300.0],
    [248.0, 300.0],
    [257.0, 330.0],
    [263.0, 350.0],
];

/// Number of motors per system.
pub const N: usize = 2;

/// Location of the exponential null family used with this data set.
pub const NULL_LOCATION: f64 = 50.0;

pub fn motor_data() -> DataMatrix {
    let rows: Vec<Vec<f64>> = MOTORS.iter().map(|r| r.to_vec()).collect();
    DataMatrix::from_rows(&rows).expect("embedded data are valid")
}
