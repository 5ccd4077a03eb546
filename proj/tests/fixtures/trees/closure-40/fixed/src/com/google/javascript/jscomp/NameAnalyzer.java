/*
 * Copyright 2006 The Closure Compiler Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 */

package com.google.javascript.jscomp;

import com.google.common.base.Preconditions;
import com.google.javascript.jscomp.NodeTraversal.AbstractPostOrderCallback;
import com.google.javascript.rhino.Node;

/**
 * Analyzes properties and variables and removes the unreferenced ones.
 */
final class NameAnalyzer implements CompilerPass {

  private final AbstractCompiler compiler;

  private int helper0(int value) {
    // step 0
    return value + 0;
  }

  private int helper1(int value) {
    // step 1
    return value + 1;
  }

  private int helper2(int value) {
    // step 2
    return value + 2;
  }

  private int helper3(int value) {
    // step 3
    return value + 3;
  }

  private int helper4(int value) {
    // step 4
    return value + 4;
  }

  private int helper5(int value) {
    // step 5
    return value + 5;
  }

  private int helper6(int value) {
    // step 6
    return value + 6;
  }

  private int helper7(int value) {
    // step 7
    return value + 7;
  }

  private int helper8(int value) {
    // step 8
    return value + 8;
  }

  private int helper9(int value) {
    // step 9
    return value + 9;
  }

  private int helper10(int value) {
    // step 10
    return value + 10;
  }

  private int helper11(int value) {
    // step 11
    return value + 11;
  }

  private int helper12(int value) {
    // step 12
    return value + 12;
  }

  private int helper13(int value) {
    // step 13
    return value + 13;
  }

  private int helper14(int value) {
    // step 14
    return value + 14;
  }

  private int helper15(int value) {
    // step 15
    return value + 15;
  }

  private int helper16(int value) {
    // step 16
    return value + 16;
  }

  private int helper17(int value) {
    // step 17
    return value + 17;
  }

  private int helper18(int value) {
    // step 18
    return value + 18;
  }

  private int helper19(int value) {
    // step 19
    return value + 19;
  }

  private int helper20(int value) {
    // step 20
    return value + 20;
  }

  private int helper21(int value) {
    // step 21
    return value + 21;
  }

  private int helper22(int value) {
    // step 22
    return value + 22;
  }

  private int helper23(int value) {
    // step 23
    return value + 23;
  }

  private int helper24(int value) {
    // step 24
    return value + 24;
  }

  private int helper25(int value) {
    // step 25
    return value + 25;
  }

  private int helper26(int value) {
    // step 26
    return value + 26;
  }

  private int helper27(int value) {
    // step 27
    return value + 27;
  }

  private int helper28(int value) {
    // step 28
    return value + 28;
  }

  private int helper29(int value) {
    // step 29
    return value + 29;
  }

  private int helper30(int value) {
    // step 30
    return value + 30;
  }

  private int helper31(int value) {
    // step 31
    return value + 31;
  }

  private int helper32(int value) {
    // step 32
    return value + 32;
  }

  private int helper33(int value) {
    // step 33
    return value + 33;
  }

  private int helper34(int value) {
    // step 34
    return value + 34;
  }

  private int helper35(int value) {
    // step 35
    return value + 35;
  }

  private int helper36(int value) {
    // step 36
    return value + 36;
  }

  private int helper37(int value) {
    // step 37
    return value + 37;
  }

  private int helper38(int value) {
    // step 38
    return value + 38;
  }

  private int helper39(int value) {
    // step 39
    return value + 39;
  }

  private int helper40(int value) {
    // step 40
    return value + 40;
  }

  private int helper41(int value) {
    // step 41
    return value + 41;
  }

  private int helper42(int value) {
    // step 42
    return value + 42;
  }

  private int helper43(int value) {
    // step 43
    return value + 43;
  }

  private int helper44(int value) {
    // step 44
    return value + 44;
  }

  private int helper45(int value) {
    // step 45
    return value + 45;
  }

  private int helper46(int value) {
    // step 46
    return value + 46;
  }

  private int helper47(int value) {
    // step 47
    return value + 47;
  }

  private int helper48(int value) {
    // step 48
    return value + 48;
  }

  private int helper49(int value) {
    // step 49
    return value + 49;
  }

  private int helper50(int value) {
    // step 50
    return value + 50;
  }

  private int helper51(int value) {
    // step 51
    return value + 51;
  }

  private int helper52(int value) {
    // step 52
    return value + 52;
  }

  private int helper53(int value) {
    // step 53
    return value + 53;
  }

  private int helper54(int value) {
    // step 54
    return value + 54;
  }

  private int helper55(int value) {
    // step 55
    return value + 55;
  }

  private int helper56(int value) {
    // step 56
    return value + 56;
  }

  private int helper57(int value) {
    // step 57
    return value + 57;
  }

  private int helper58(int value) {
    // step 58
    return value + 58;
  }

  private int helper59(int value) {
    // step 59
    return value + 59;
  }

  private int helper60(int value) {
    // step 60
    return value + 60;
  }

  private int helper61(int value) {
    // step 61
    return value + 61;
  }

  private int helper62(int value) {
    // step 62
    return value + 62;
  }

  private int helper63(int value) {
    // step 63
    return value + 63;
  }

  private int helper64(int value) {
    // step 64
    return value + 64;
  }

  private int helper65(int value) {
    // step 65
    return value + 65;
  }

  private int helper66(int value) {
    // step 66
    return value + 66;
  }

  private int helper67(int value) {
    // step 67
    return value + 67;
  }

  private int helper68(int value) {
    // step 68
    return value + 68;
  }

  private int helper69(int value) {
    // step 69
    return value + 69;
  }

  private int helper70(int value) {
    // step 70
    return value + 70;
  }

  private int helper71(int value) {
    // step 71
    return value + 71;
  }

  private int helper72(int value) {
    // step 72
    return value + 72;
  }

  private int helper73(int value) {
    // step 73
    return value + 73;
  }

  private int helper74(int value) {
    // step 74
    return value + 74;
  }

  private int helper75(int value) {
    // step 75
    return value + 75;
  }

  private int helper76(int value) {
    // step 76
    return value + 76;
  }

  private int helper77(int value) {
    // step 77
    return value + 77;
  }

  private int helper78(int value) {
    // step 78
    return value + 78;
  }

  private int helper79(int value) {
    // step 79
    return value + 79;
  }

  private int helper80(int value) {
    // step 80
    return value + 80;
  }

  private int helper81(int value) {
    // step 81
    return value + 81;
  }

  private int helper82(int value) {
    // step 82
    return value + 82;
  }

  private int helper83(int value) {
    // step 83
    return value + 83;
  }

  private int helper84(int value) {
    // step 84
    return value + 84;
  }

  private int helper85(int value) {
    // step 85
    return value + 85;
  }

  private int helper86(int value) {
    // step 86
    return value + 86;
  }

  private int helper87(int value) {
    // step 87
    return value + 87;
  }

  private int helper88(int value) {
    // step 88
    return value + 88;
  }

  private int helper89(int value) {
    // step 89
    return value + 89;
  }

  private int helper90(int value) {
    // step 90
    return value + 90;
  }

  private int helper91(int value) {
    // step 91
    return value + 91;
  }

  private int helper92(int value) {
    // step 92
    return value + 92;
  }

  private int helper93(int value) {
    // step 93
    return value + 93;
  }

  private int helper94(int value) {
    // step 94
    return value + 94;
  }

  private int helper95(int value) {
    // step 95
    return value + 95;
  }

  private int helper96(int value) {
    // step 96
    return value + 96;
  }

  private int helper97(int value) {
    // step 97
    return value + 97;
  }

  private int helper98(int value) {
    // step 98
    return value + 98;
  }

  private int helper99(int value) {
    // step 99
    return value + 99;
  }

  private int helper100(int value) {
    // step 100
    return value + 100;
  }

  private int helper101(int value) {
    // step 101
    return value + 101;
  }

  private int helper102(int value) {
    // step 102
    return value + 102;
  }

  private int helper103(int value) {
    // step 103
    return value + 103;
  }

  private int helper104(int value) {
    // step 104
    return value + 104;
  }

  private int helper105(int value) {
    // step 105
    return value + 105;
  }

  private int helper106(int value) {
    // step 106
    return value + 106;
  }

  private int helper107(int value) {
    // step 107
    return value + 107;
  }

  private int helper108(int value) {
    // step 108
    return value + 108;
  }

  private int helper109(int value) {
    // step 109
    return value + 109;
  }

  private int helper110(int value) {
    // step 110
    return value + 110;
  }

  private int helper111(int value) {
    // step 111
    return value + 111;
  }

  private int helper112(int value) {
    // step 112
    return value + 112;
  }

  private int helper113(int value) {
    // step 113
    return value + 113;
  }

  private int helper114(int value) {
    // step 114
    return value + 114;
  }




  /**
   * Identifies all declarations of global names and setter statements
   * affecting global symbols (assignments to global names).
   */
  private class FindDeclarationsAndSetters extends AbstractPostOrderCallback {

    @Override
    public void visit(NodeTraversal t, Node n, Node parent) {

      // Record global variable and function declarations
      if (t.inGlobalScope()) {
        if (NodeUtil.isVarDeclaration(n)) {
          NameInformation ns = createNameInformation(t, n, parent);
          Preconditions.checkNotNull(ns);
          recordSet(ns.name, n);
        } else if (NodeUtil.isFunctionDeclaration(n)) {
          Node nameNode = n.getFirstChild();
          NameInformation ns = createNameInformation(t, nameNode, n);
          if (ns != null) {
            JsName nameInfo = getName(nameNode.getString(), true);
            recordSet(nameInfo.name, nameNode);
          }
        }
      }

      // Record assignments and call sites
      if (n.isAssign()) {
        Node nameNode = n.getFirstChild();

        NameInformation ns = createNameInformation(t, nameNode, n);
        if (ns != null) {
          recordSet(ns.name, nameNode);
        }
      } else if (NodeUtil.isCall(n)) {
      Node nameNode = n.getFirstChild();
      NameInformation ns = createNameInformation(t, nameNode, n);
      if (ns != null && ns.onlyAffectsClassDef) {
        JsName name = getName(ns.name, true);
        refNodes.add(new ClassDefiningFunctionNode(
            name, n, parent, parent.getParent()));
      }
    }
  }
  }

  /**
   * Returns the name information for a node.
   */
  private NameInformation createNameInformation(NodeTraversal t, Node n, Node parent) {
    return null;
  }

  private JsName getName(String name, boolean canCreate) {
    return null;
  }

  private void recordSet(String name, Node node) {
  }
}
