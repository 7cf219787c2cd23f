// Generated by tools/calibrate_tables. Do not edit.
#include "atollpr/constants.hpp"

namespace atollpr {

namespace {
constexpr double kTau[] = {0, 0.050000000000000003, 0.10000000000000001, 0.15000000000000002, 0.20000000000000001, 0.25, 0.30000000000000004, 0.35000000000000003, 0.40000000000000002, 0.45000000000000001, 0.5, 0.55000000000000004, 0.60000000000000009, 0.65000000000000002, 0.70000000000000007, 0.75, 0.80000000000000004, 0.85000000000000009, 0.90000000000000002, 0.95000000000000007};
constexpr double kRho[] = {0.76481168476276762, 0.77694781705212401, 0.79356656007441018, 0.8120124917510354, 0.83286513015435737, 0.85618112955661041, 0.88281623779445029, 0.91344884617291655, 0.94763671599012511, 0.98716234790251045, 1.0324548571125303, 1.0853936606142773, 1.1495762731694306, 1.2268492876399808, 1.323481649680549, 1.4480917425174933, 1.617108865198353, 1.8698380285786229, 2.2878891937875832, 3.2336099188439111};
constexpr double kPoincare[] = {0.54376147136294406, 0.54650533035931637, 0.55558425200133721, 0.56980882128385157, 0.58851875112692797, 0.60997613523456162, 0.63424795719474436, 0.66068463204369221, 0.68730392794691608, 0.71480827126354829, 0.74196511109799335, 0.7695759299481858, 0.79742935093674316, 0.82538849926831181, 0.85354398091515293, 0.88141475996202112, 0.91073786054287509, 0.93718734132165238, 0.96283270162931078, 0.988418221261393};
}  // namespace

const CalibrationTable& calibration() {
  static const CalibrationTable table{"cal-1", kTau, kRho, kPoincare, 1.02, 1.02};
  return table;
}

}  // namespace atollpr
