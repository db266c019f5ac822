#include "vbkreg/scenarios.hpp"

#include <stdexcept>

namespace vbkreg {

namespace {

ScenarioConfig base_cfg(const std::string& name) {
  ScenarioConfig cfg;
  cfg.name = name;
  cfg.reg_id = 2;
  cfg.x_dist = Distribution::student_t(4);
  cfg.eps_dist = Distribution::uniform(-0.5, 0.5);
  cfg.n = 5000;
  cfg.reps = 250;
  return cfg;
}

const std::vector<double> kPointsT4 = {-7.161518, -5.593896, -4.026274, -2.458652,
                                       -0.89103,  0.676592,  2.244214,  3.811836,
                                       5.379458,  6.94708};
const std::vector<double> kPointsN01 = {-3.166296000, -2.476748778, -1.787201556,
                                        -1.097654333, -0.408107111, 0.281440111,
                                        0.970987333,  1.660534556,  2.350081778,
                                        3.039629000};

}  // namespace

std::vector<std::string> builtin_scenario_names() {
  return {"table1-row1", "table1-row2", "table1-row3", "table2-row1", "table2-row2",
          "table2-row3", "table2-row4", "table2-row5", "table2-row6", "table2-row7",
          "table3",      "table4",      "table5",      "table6",      "table7"};
}

BuiltinScenario builtin_scenario(const std::string& name) {
  BuiltinScenario b;
  b.cfg = base_cfg(name);
  if (name == "table1-row1") {
    return b;
  } else if (name == "table1-row2") {
    b.cfg.eps_dist = Distribution::uniform(-1.0, 1.0);
    return b;
  } else if (name == "table1-row3") {
    b.cfg.eps_dist = Distribution::uniform(-2.0, 2.0);
    return b;
  } else if (name == "table2-row1") {
    b.cfg.x_dist = Distribution::student_t(1);
    return b;
  } else if (name == "table2-row2") {
    b.cfg.x_dist = Distribution::student_t(4);
    return b;
  } else if (name == "table2-row3") {
    b.cfg.x_dist = Distribution::student_t(8);
    return b;
  } else if (name == "table2-row4") {
    b.cfg.x_dist = Distribution::cauchy(3.0, 4.0);
    return b;
  } else if (name == "table2-row5") {
    b.cfg.x_dist = Distribution::cauchy(5.0, 7.0);
    return b;
  } else if (name == "table2-row6") {
    b.cfg.x_dist = Distribution::normal(0.0, 1.0);
    return b;
  } else if (name == "table2-row7") {
    b.cfg.x_dist = Distribution::normal(5.0, 10.0);
    return b;
  } else if (name == "table3") {
    b.n_sweep = {500, 1000, 2000, 5000, 8000, 10000};
    return b;
  } else if (name == "table4") {
    b.cfg.eps_dist = Distribution::normal(0.0, 1.0);
    b.points = kPointsT4;
    return b;
  } else if (name == "table5") {
    b.cfg.eps_dist = Distribution::uniform(-1.0, 1.0);
    b.points = kPointsT4;
    return b;
  } else if (name == "table6") {
    b.cfg.x_dist = Distribution::normal(0.0, 1.0);
    b.cfg.eps_dist = Distribution::normal(0.0, 1.0);
    b.points = kPointsN01;
    return b;
  } else if (name == "table7") {
    b.cfg.x_dist = Distribution::normal(0.0, 1.0);
    b.cfg.eps_dist = Distribution::uniform(-1.0, 1.0);
    b.points = kPointsN01;
    return b;
  }
  throw std::invalid_argument("unknown built-in scenario: " + name);
}

}  // namespace vbkreg
