// Copyright 2026 The lgtest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "lgtest/compiler.hpp"
#include "lgtest/protocols.hpp"
#include "lgtest/qasm.hpp"
#include "random_circuits.hpp"

namespace {

using namespace lgtest;
using namespace lgtest::gateset;

std::vector<std::string> statements(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

TEST(Qasm, EmptyCircuitRoundTrip) {
  const std::string text = to_qasm(Circuit());
  EXPECT_EQ(text, "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[5];\ncreg c[5];\n");
  EXPECT_EQ(from_qasm(text), Circuit());
}

TEST(Qasm, ProtocolASerialization) {
  const auto a = protocols::build_protocol(protocols::ProtocolId::A);
  const auto lines = statements(to_qasm(a.circuit));
  const std::vector<std::string> head{"x q[2];", "h q[2];", "sdg q[2];", "h q[2];", "t q[2];", "h q[2];"};
  ASSERT_GT(lines.size(), 4 + head.size());
  for (std::size_t i = 0; i < head.size(); ++i) EXPECT_EQ(lines[4 + i], head[i]);
  EXPECT_EQ(lines.back(), "measure q[2] -> c[2];");
  EXPECT_EQ(from_qasm(to_qasm(a.circuit)), asap(a.circuit));
}

TEST(Qasm, UnsupportedStatementNamesToken) {
  const std::string text = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[5];\nccx q[0],q[1],q[2];\n";
  try {
    from_qasm(text);
    FAIL() << "expected parse error";
  } catch (const QasmParseError& e) {
    EXPECT_EQ(e.line(), 4);
    EXPECT_NE(std::string(e.what()).find("ccx"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
  }
}

TEST(Qasm, OtherParseErrors) {
  const std::string hdr = "OPENQASM 2.0;\nqreg q[5];\n";
  EXPECT_THROW(from_qasm("qreg q[5];\n"), QasmParseError);
  EXPECT_THROW(from_qasm(hdr + "u3(0,0,0) q[0];\n"), QasmParseError);
  EXPECT_THROW(from_qasm(hdr + "h q[7];\n"), QasmParseError);
  EXPECT_THROW(from_qasm(hdr + "measure q[0] -> c[0];\nh q[1];\n"), QasmParseError);
  EXPECT_THROW(from_qasm(hdr + "cx q[2],q[2];\n"), QasmParseError);
  EXPECT_THROW(from_qasm(hdr + "qreg r[2];\n"), QasmParseError);
  EXPECT_THROW(from_qasm(hdr + "rx(abc) q[0];\n"), QasmParseError);
  EXPECT_THROW(from_qasm("OPENQASM 2.0;\nh q[0];\n"), QasmParseError);
}

TEST(Qasm, CommentsAndWhitespaceTolerated) {
  const auto c = from_qasm("// hi\nOPENQASM 2.0;\n  qreg q[3];\ncreg c[3];\nh  q[ 0 ] ; // x\n\ncx q[0], q[2];\nmeasure q[2] -> c[2];\n");
  ASSERT_EQ(c.gates().size(), 2u);
  EXPECT_EQ(c.gates()[1].kind, GateKind::CNOT);
  EXPECT_EQ(c.gates()[1].slot, 1);
  EXPECT_EQ(c.measurement_slot(2), 2);
}

TEST(Qasm, RxAngleSurvivesBitExact) {
  Circuit c;
  c.rx(-2.356194490192345, 2, 0).rx(1e-17, 1, 0).measure(2, 1);
  EXPECT_EQ(from_qasm(to_qasm(c)), asap(c));
}

TEST(Qasm, RandomDeviceCircuitsRoundTrip) {
  std::mt19937_64 rng(9001);
  for (int i = 0; i < 1000; ++i) {
    const Circuit c = testutil::random_device_circuit(rng);
    const Circuit back = from_qasm(to_qasm(c));
    ASSERT_EQ(back, asap(c)) << "case " << i;
    ASSERT_EQ(to_qasm(back), to_qasm(asap(c)));
    for (int q = 0; q < 5; ++q) {
      const auto a = c.qubit_gates(q), b = back.qubit_gates(q);
      ASSERT_EQ(a.size(), b.size());
      for (std::size_t k = 0; k < a.size(); ++k) {
        ASSERT_EQ(a[k].kind, b[k].kind);
        ASSERT_EQ(a[k].qubit, b[k].qubit);
        ASSERT_EQ(a[k].target, b[k].target);
      }
    }
  }
}

TEST(Qasm, AllProtocolsRoundTrip) {
  for (auto id : protocols::kAllProtocols) {
    const auto pc = protocols::build_protocol(id);
    const auto back = from_qasm(to_qasm(pc.circuit));
    EXPECT_EQ(back, asap(pc.circuit));
    EXPECT_TRUE(validate(back, DeviceConstraints::device()).empty());
  }
}

}  // namespace
