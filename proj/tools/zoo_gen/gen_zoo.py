#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Regenerates core/zoo/*.json from compact layer-table descriptions.

Layer tables follow the original architecture publications and their
reference Caffe deploy definitions. Run from the repository root:

    python3 tools/zoo_gen/gen_zoo.py [--stats]
"""
import json
import math
import os
import sys

BN = ["bn", "scale", "relu"]
BN_LINEAR = ["bn", "scale"]


def out_side(s, k, stride, padding, pad=0):
    if padding == "same":
        return -(-s // stride)
    if padding == "valid":
        return (s + 2 * pad - k) // stride + 1
    if padding == "ceil":
        return -(-(s + 2 * pad - k) // stride) + 1
    raise ValueError(padding)


class Net:
    def __init__(self, name, group, input_size, components, provenance,
                 reference=False, approximate=False, input_channels=3):
        self.doc = {
            "schema_version": 1,
            "name": name,
            "group": group,
            "reference": reference,
            "input_size": input_size,
            "input_channels": input_channels,
            "components": components,
            "provenance": provenance,
            "approximate": approximate,
            "layers": [],
        }
        self.shape = {"input": (input_channels, input_size)}
        self.last = "input"

    def _add(self, layer, n, s):
        assert layer["id"] not in self.shape, layer["id"]
        self.doc["layers"].append(layer)
        self.shape[layer["id"]] = (n, s)
        self.last = layer["id"]
        return layer["id"]

    def conv(self, lid, n, k, stride=1, padding="same", groups=1, src=None,
             post=None, kw=None, kind=None):
        src = src or self.last
        m, s = self.shape[src]
        if kind is None:
            if groups > 1 and groups == m and n == m:
                kind = "depthwise-conv"
            elif groups > 1:
                kind = "group-conv"
            elif k == 1 and (kw is None or kw == 1):
                kind = "pointwise-conv"
            else:
                kind = "standard-conv"
        layer = {"id": lid, "kind": kind, "M": m, "N": n, "S_F": k,
                 "stride": stride, "groups": groups, "padding": padding,
                 "fan_in": [src]}
        if kw is not None and kw != k:
            layer["S_Fw"] = kw
        if post:
            layer["post"] = list(post)
        return self._add(layer, n, out_side(s, k, stride, padding))

    def fc(self, lid, n, src=None, post=None):
        src = src or self.last
        m, s = self.shape[src]
        layer = {"id": lid, "kind": "fully-connected", "M": m * s * s, "N": n,
                 "S_F": 1, "stride": 1, "groups": 1, "padding": "valid",
                 "fan_in": [src]}
        if post:
            layer["post"] = list(post)
        return self._add(layer, n, 1)

    def pool(self, lid, k, stride, padding="ceil", src=None, global_=False,
             post=None, pad=0):
        src = src or self.last
        m, s = self.shape[src]
        if global_:
            k, stride, padding = s, 1, "valid"
        layer = {"id": lid, "kind": "pool", "M": m, "N": m, "S_F": k,
                 "stride": stride, "padding": padding, "fan_in": [src]}
        if pad:
            layer["pad"] = pad
        if post:
            layer["post"] = list(post)
        return self._add(layer, m, out_side(s, k, stride, padding, pad))

    def op(self, lid, name, src=None):
        src = src or self.last
        m, s = self.shape[src]
        layer = {"id": lid, "kind": "op", "op": name, "M": m, "N": m,
                 "fan_in": [src]}
        return self._add(layer, m, s)

    def concat(self, lid, srcs, post=None):
        sides = {self.shape[x][1] for x in srcs}
        assert len(sides) == 1, (lid, srcs, sides)
        n = sum(self.shape[x][0] for x in srcs)
        layer = {"id": lid, "kind": "concat", "N": n, "fan_in": list(srcs)}
        if post:
            layer["post"] = list(post)
        return self._add(layer, n, sides.pop())

    def add(self, lid, srcs, post=None):
        shapes = {self.shape[x] for x in srcs}
        assert len(shapes) == 1, (lid, srcs, shapes)
        n, s = shapes.pop()
        layer = {"id": lid, "kind": "add", "N": n, "fan_in": list(srcs)}
        if post:
            layer["post"] = list(post)
        return self._add(layer, n, s)

    def shuffle(self, lid, groups, src=None):
        src = src or self.last
        m, s = self.shape[src]
        layer = {"id": lid, "kind": "shuffle", "M": m, "N": m,
                 "groups": groups, "fan_in": [src]}
        return self._add(layer, m, s)

    def slice(self, lid, n, src=None):
        src = src or self.last
        m, s = self.shape[src]
        layer = {"id": lid, "kind": "slice", "M": m, "N": n, "fan_in": [src]}
        return self._add(layer, n, s)

    def channel_scale(self, lid, features, gates):
        n, s = self.shape[features]
        assert self.shape[gates] == (n, 1)
        layer = {"id": lid, "kind": "channel-scale", "N": n,
                 "fan_in": [features, gates]}
        return self._add(layer, n, s)


# ---------------------------------------------------------------- networks

def alexnet():
    net = Net("AlexNet", "NonCompact", 227, [],
              "Krizhevsky et al. 2012; BVLC Caffe bvlc_alexnet deploy (grouped conv2/4/5)",
              reference=True)
    net.conv("conv1", 96, 11, 4, "valid", post=["relu", "lrn"])
    net.pool("pool1", 3, 2)
    net.conv("conv2", 256, 5, 1, "same", groups=2, post=["relu", "lrn"])
    net.pool("pool2", 3, 2)
    net.conv("conv3", 384, 3, post=["relu"])
    net.conv("conv4", 384, 3, groups=2, post=["relu"])
    net.conv("conv5", 256, 3, groups=2, post=["relu"])
    net.pool("pool5", 3, 2)
    net.fc("fc6", 4096, post=["relu", "dropout"])
    net.fc("fc7", 4096, post=["relu", "dropout"])
    net.fc("fc8", 1000, post=["softmax"])
    return net


def fire(net, name, squeeze, e1, e3):
    s = net.conv(f"{name}/squeeze1x1", squeeze, 1, post=["relu"])
    a = net.conv(f"{name}/expand1x1", e1, 1, src=s, post=["relu"])
    b = net.conv(f"{name}/expand3x3", e3, 3, src=s, post=["relu"])
    return net.concat(f"{name}/concat", [a, b])


def squeezenet_v10():
    net = Net("SqueezeNet-V1.0", "SqueezeNet", 227,
              ["fire-module", "pwconv", "branching"],
              "Iandola et al. 2016; DeepScale SqueezeNet v1.0 Caffe deploy",
              reference=True)
    net.conv("conv1", 96, 7, 2, "valid", post=["relu"])
    net.pool("pool1", 3, 2)
    fire(net, "fire2", 16, 64, 64)
    fire(net, "fire3", 16, 64, 64)
    fire(net, "fire4", 32, 128, 128)
    net.pool("pool4", 3, 2)
    fire(net, "fire5", 32, 128, 128)
    fire(net, "fire6", 48, 192, 192)
    fire(net, "fire7", 48, 192, 192)
    fire(net, "fire8", 64, 256, 256)
    net.pool("pool8", 3, 2)
    fire(net, "fire9", 64, 256, 256)
    net.op("drop9", "dropout")
    net.conv("conv10", 1000, 1, post=["relu"])
    net.pool("pool10", 0, 0, global_=True, post=["softmax"])
    return net


def squeezenet_v11():
    net = Net("SqueezeNet-V1.1", "SqueezeNet", 224,
              ["fire-module", "pwconv", "branching"],
              "Iandola et al. 2016; DeepScale SqueezeNet v1.1 Caffe deploy")
    net.conv("conv1", 64, 3, 2, "valid", post=["relu"])
    net.pool("pool1", 3, 2)
    fire(net, "fire2", 16, 64, 64)
    fire(net, "fire3", 16, 64, 64)
    net.pool("pool3", 3, 2)
    fire(net, "fire4", 32, 128, 128)
    fire(net, "fire5", 32, 128, 128)
    net.pool("pool5", 3, 2)
    fire(net, "fire6", 48, 192, 192)
    fire(net, "fire7", 48, 192, 192)
    fire(net, "fire8", 64, 256, 256)
    fire(net, "fire9", 64, 256, 256)
    net.op("drop9", "dropout")
    net.conv("conv10", 1000, 1, post=["relu"])
    net.pool("pool10", 0, 0, global_=True, post=["softmax"])
    return net


SQNXT_COMPONENTS = ["fire-module", "pwconv", "branching", "residual-skip",
                    "asymmetric-filter-decomposition"]


def squeezenext(name, width, blocks, grouped=False, reference=False):
    net = Net(name, "SqueezeNext", 227, SQNXT_COMPONENTS,
              "Gholami et al. 2018 (SqueezeNext), Table/Fig. block layout; "
              "stage widths 32/64/128/256 x width, block counts per variant",
              reference=reference, approximate=True)
    net.conv("conv1", int(64 * width), 7, 2, "valid", post=BN)
    net.pool("pool1", 3, 2)
    widths = [int(c * width) for c in (32, 64, 128, 256)]
    g = 2 if grouped else 1
    for si, (out, count) in enumerate(zip(widths, blocks)):
        for bi in range(count):
            stride = 2 if (si > 0 and bi == 0) else 1
            p = f"stage{si + 1}/block{bi + 1}"
            src = net.last
            in_ch = net.shape[src][0]
            half, quarter = out // 2, out // 4
            net.conv(f"{p}/reduce1", half, 1, stride, src=src, post=BN)
            net.conv(f"{p}/reduce2", quarter, 1, post=BN)
            net.conv(f"{p}/conv3x1", half, 3, kw=1, groups=g, post=BN)
            net.conv(f"{p}/conv1x3", half, 1, kw=3, groups=g, post=BN)
            body = net.conv(f"{p}/expand", out, 1, post=BN)
            if stride != 1 or in_ch != out:
                short = net.conv(f"{p}/shortcut", out, 1, stride, src=src,
                                 post=BN)
            else:
                short = src
            net.add(f"{p}/add", [body, short], post=["relu"])
    net.conv("conv_final", int(128 * width), 1, post=BN)
    net.pool("pool_final", 0, 0, global_=True)
    net.fc("fc", 1000, post=["softmax"])
    return net


def mobilenet_v1():
    net = Net("MobileNet-V1", "MobileNet", 224, ["dwconv", "pwconv"],
              "Howard et al. 2017, Table 1 body; Caffe MobileNet-Caffe deploy "
              "(conv+bn+scale+relu per layer)", reference=True)
    net.conv("conv1", 32, 3, 2, post=BN)
    cfg = [(64, 1), (128, 2), (128, 1), (256, 2), (256, 1), (512, 2)] + \
          [(512, 1)] * 5 + [(1024, 2), (1024, 1)]
    names = ["conv2_1", "conv2_2", "conv3_1", "conv3_2", "conv4_1", "conv4_2",
             "conv5_1", "conv5_2", "conv5_3", "conv5_4", "conv5_5", "conv5_6",
             "conv6"]
    for name, (out, stride) in zip(names, cfg):
        m = net.shape[net.last][0]
        net.conv(f"{name}/dw", m, 3, stride, groups=m, post=BN)
        net.conv(f"{name}/sep", out, 1, post=BN)
    net.pool("pool6", 0, 0, global_=True)
    net.conv("fc7", 1000, 1, post=["softmax"])
    return net


def mobilenet_v2():
    net = Net("MobileNet-V2", "MobileNet", 224,
              ["dwconv", "pwconv", "residual-skip"],
              "Sandler et al. 2018, Table 2; Caffe MobileNet-Caffe v2 deploy")
    net.conv("conv1", 32, 3, 2, post=BN)
    cfg = [(1, 16, 1, 1), (6, 24, 2, 2), (6, 32, 3, 2), (6, 64, 4, 2),
           (6, 96, 3, 1), (6, 160, 3, 2), (6, 320, 1, 1)]
    idx = 0
    for t, c, n, s in cfg:
        for i in range(n):
            idx += 1
            stride = s if i == 0 else 1
            src = net.last
            m = net.shape[src][0]
            p = f"block{idx}"
            hidden = m * t
            if t != 1:
                net.conv(f"{p}/expand", hidden, 1, src=src, post=BN)
            net.conv(f"{p}/dwise", hidden, 3, stride, groups=hidden, post=BN)
            out = net.conv(f"{p}/linear", c, 1, post=BN_LINEAR)
            if stride == 1 and m == c:
                net.add(f"{p}/add", [src, out])
    net.conv("conv_last", 1280, 1, post=BN)
    net.pool("pool", 0, 0, global_=True)
    net.conv("fc", 1000, 1, post=["softmax"])
    return net


SHUFFLE_COMPONENTS = ["dwconv", "channel-shuffling", "pwconv", "branching",
                      "residual-skip"]


def shufflenet_v1():
    g = 3
    net = Net("ShuffleNet-V1", "ShuffleNet", 224, SHUFFLE_COMPONENTS,
              "Zhang et al. 2018, Table 1 (1x, g=3)", reference=True,
              approximate=True)
    net.conv("conv1", 24, 3, 2, post=BN)
    net.pool("pool1", 3, 2, padding="same")
    for si, (out, count) in enumerate(zip((240, 480, 960), (4, 8, 4))):
        for bi in range(count):
            p = f"stage{si + 2}/unit{bi + 1}"
            src = net.last
            m = net.shape[src][0]
            stride = 2 if bi == 0 else 1
            branch_out = out - m if stride == 2 else out
            mid = out // 4
            first_g = 1 if (si == 0 and bi == 0) else g
            net.conv(f"{p}/gconv1", mid, 1, src=src, groups=first_g, post=BN)
            net.shuffle(f"{p}/shuffle", g)
            net.conv(f"{p}/dwconv", mid, 3, stride, groups=mid, post=BN_LINEAR)
            body = net.conv(f"{p}/gconv2", branch_out, 1, groups=g,
                            post=BN_LINEAR)
            if stride == 2:
                short = net.pool(f"{p}/avgpool", 3, 2, padding="same", src=src)
                net.concat(f"{p}/concat", [short, body], post=["relu"])
            else:
                net.add(f"{p}/add", [src, body], post=["relu"])
    net.pool("pool_final", 0, 0, global_=True)
    net.fc("fc", 1000, post=["softmax"])
    return net


def shufflenet_v2():
    net = Net("ShuffleNet-V2", "ShuffleNet", 224, SHUFFLE_COMPONENTS,
              "Ma et al. 2018, Table 5 (2x)", approximate=True)
    net.conv("conv1", 24, 3, 2, post=BN)
    net.pool("pool1", 3, 2, padding="same")
    for si, (out, count) in enumerate(zip((244, 488, 976), (4, 8, 4))):
        for bi in range(count):
            p = f"stage{si + 2}/unit{bi + 1}"
            src = net.last
            m = net.shape[src][0]
            half = out // 2
            if bi == 0:
                net.conv(f"{p}/left/dw", m, 3, 2, src=src, groups=m,
                         post=BN_LINEAR)
                left = net.conv(f"{p}/left/pw", half, 1, post=BN)
                net.conv(f"{p}/right/pw1", half, 1, src=src, post=BN)
                net.conv(f"{p}/right/dw", half, 3, 2, groups=half,
                         post=BN_LINEAR)
                right = net.conv(f"{p}/right/pw2", half, 1, post=BN)
            else:
                left = net.slice(f"{p}/split_left", m // 2, src=src)
                net.slice(f"{p}/split_right", m // 2, src=src)
                net.conv(f"{p}/right/pw1", half, 1, post=BN)
                net.conv(f"{p}/right/dw", half, 3, 1, groups=half,
                         post=BN_LINEAR)
                right = net.conv(f"{p}/right/pw2", half, 1, post=BN)
            net.concat(f"{p}/concat", [left, right])
            net.shuffle(f"{p}/shuffle", 2)
    net.conv("conv5", 2048, 1, post=BN)
    net.pool("pool_final", 0, 0, global_=True)
    net.fc("fc", 1000, post=["softmax"])
    return net


def densenet121():
    net = Net("DenseNet-121", "DenseNet", 224,
              ["dense-block", "pwconv", "residual-skip"],
              "Huang et al. 2017, Table 1 (DenseNet-121, k=32, BC); "
              "shicai DenseNet-Caffe deploy", reference=True)
    growth = 32
    net.conv("conv1", 64, 7, 2, post=BN)
    net.pool("pool1", 3, 2, pad=1)
    for bi, count in enumerate((6, 12, 24, 16)):
        for li in range(count):
            p = f"block{bi + 1}/layer{li + 1}"
            src = net.last
            net.op(f"{p}/bn", "bn", src=src)
            net.op(f"{p}/scale", "scale")
            net.op(f"{p}/relu", "relu")
            net.conv(f"{p}/x1", 4 * growth, 1, post=BN)
            new = net.conv(f"{p}/x2", growth, 3)
            net.concat(f"{p}/concat", [src, new])
        if bi < 3:
            p = f"transition{bi + 1}"
            m = net.shape[net.last][0]
            net.op(f"{p}/bn", "bn")
            net.op(f"{p}/scale", "scale")
            net.op(f"{p}/relu", "relu")
            net.conv(f"{p}/conv", m // 2, 1)
            net.pool(f"{p}/pool", 2, 2)
    net.op("final/bn", "bn")
    net.op("final/scale", "scale")
    net.op("final/relu", "relu")
    net.pool("pool_final", 0, 0, global_=True)
    net.conv("fc6", 1000, 1, post=["softmax"])
    return net


def inception(net, name, c1, c3r, c3, c5r, c5, pp, post=("relu",)):
    src = net.last
    a = net.conv(f"{name}/1x1", c1, 1, src=src, post=list(post))
    net.conv(f"{name}/3x3_reduce", c3r, 1, src=src, post=list(post))
    b = net.conv(f"{name}/3x3", c3, 3, post=list(post))
    net.conv(f"{name}/5x5_reduce", c5r, 1, src=src, post=list(post))
    c = net.conv(f"{name}/5x5", c5, 5, post=list(post))
    net.pool(f"{name}/pool", 3, 1, padding="same", src=src)
    d = net.conv(f"{name}/pool_proj", pp, 1, post=list(post))
    return net.concat(f"{name}/output", [a, b, c, d])


def googlenet():
    net = Net("GoogLeNet", "InceptionNet", 224,
              ["inception-module", "pwconv", "branching"],
              "Szegedy et al. 2015, Table 1; BVLC Caffe bvlc_googlenet deploy",
              reference=True)
    net.conv("conv1/7x7_s2", 64, 7, 2, post=["relu"])
    net.pool("pool1/3x3_s2", 3, 2)
    net.op("pool1/norm1", "lrn")
    net.conv("conv2/3x3_reduce", 64, 1, post=["relu"])
    net.conv("conv2/3x3", 192, 3, post=["relu"])
    net.op("conv2/norm2", "lrn")
    net.pool("pool2/3x3_s2", 3, 2)
    inception(net, "inception_3a", 64, 96, 128, 16, 32, 32)
    inception(net, "inception_3b", 128, 128, 192, 32, 96, 64)
    net.pool("pool3/3x3_s2", 3, 2)
    inception(net, "inception_4a", 192, 96, 208, 16, 48, 64)
    inception(net, "inception_4b", 160, 112, 224, 24, 64, 64)
    inception(net, "inception_4c", 128, 128, 256, 24, 64, 64)
    inception(net, "inception_4d", 112, 144, 288, 32, 64, 64)
    inception(net, "inception_4e", 256, 160, 320, 32, 128, 128)
    net.pool("pool4/3x3_s2", 3, 2)
    inception(net, "inception_5a", 256, 160, 320, 32, 128, 128)
    inception(net, "inception_5b", 384, 192, 384, 48, 128, 128)
    net.pool("pool5/7x7_s1", 0, 0, global_=True, post=["dropout"])
    net.fc("loss3/classifier", 1000, post=["softmax"])
    return net


def bn_inception_module(net, name, c1, c3r, c3, d3r, d3, pool_kind, pp,
                        stride=1, se=False):
    src = net.last
    outs = []
    if c1:
        outs.append(net.conv(f"{name}/1x1", c1, 1, src=src, post=BN))
    net.conv(f"{name}/3x3_reduce", c3r, 1, src=src, post=BN)
    outs.append(net.conv(f"{name}/3x3", c3, 3, stride, post=BN))
    net.conv(f"{name}/double_3x3_reduce", d3r, 1, src=src, post=BN)
    net.conv(f"{name}/double_3x3_1", d3, 3, post=BN)
    outs.append(net.conv(f"{name}/double_3x3_2", d3, 3, stride, post=BN))
    net.pool(f"{name}/pool", 3, stride, padding="same", src=src)
    if pp:
        outs.append(net.conv(f"{name}/pool_proj", pp, 1, post=BN))
    else:
        outs.append(net.last)
    out = net.concat(f"{name}/output", outs)
    if se:
        n = net.shape[out][0]
        net.pool(f"{name}/se/pool", 0, 0, src=out, global_=True)
        net.fc(f"{name}/se/down", n // 16, post=["relu"])
        gates = net.fc(f"{name}/se/up", n, post=["sigmoid"])
        net.channel_scale(f"{name}/se/scale", out, gates)
    return net.last


def bn_inception(name, se, components, provenance, reference=False):
    net = Net(name, "InceptionNet", 224, components, provenance,
              reference=reference, approximate=True)
    net.conv("conv1/7x7_s2", 64, 7, 2, post=BN)
    net.pool("pool1/3x3_s2", 3, 2)
    net.conv("conv2/3x3_reduce", 64, 1, post=BN)
    net.conv("conv2/3x3", 192, 3, post=BN)
    net.pool("pool2/3x3_s2", 3, 2)
    m = bn_inception_module
    m(net, "inception_3a", 64, 64, 64, 64, 96, "avg", 32, se=se)
    m(net, "inception_3b", 64, 64, 96, 64, 96, "avg", 64, se=se)
    m(net, "inception_3c", 0, 128, 160, 64, 96, "max", 0, stride=2, se=se)
    m(net, "inception_4a", 224, 64, 96, 96, 128, "avg", 128, se=se)
    m(net, "inception_4b", 192, 96, 128, 96, 128, "avg", 128, se=se)
    m(net, "inception_4c", 160, 128, 160, 128, 160, "avg", 128, se=se)
    m(net, "inception_4d", 96, 128, 192, 160, 192, "avg", 128, se=se)
    m(net, "inception_4e", 0, 128, 192, 192, 256, "max", 0, stride=2, se=se)
    m(net, "inception_5a", 352, 192, 320, 160, 224, "avg", 128, se=se)
    m(net, "inception_5b", 352, 192, 320, 192, 224, "max", 128, se=se)
    net.pool("pool_final", 0, 0, global_=True)
    net.fc("fc", 1000, post=["softmax"])
    return net


def inception_v2():
    return bn_inception(
        "Inception-V2", False,
        ["inception-module", "pwconv", "branching",
         "asymmetric-filter-decomposition"],
        "Ioffe & Szegedy 2015 BN-Inception layout (Caffe 'inception-v2' deploy); "
        "filter factorization declared per the group taxonomy")


def se_bn_inception():
    return bn_inception(
        "SE-BN-Inception", True,
        ["inception-module", "pwconv", "branching", "residual-skip",
         "asymmetric-filter-decomposition"],
        "Hu et al. 2018 SE-BN-Inception: BN-Inception plus SE block after each "
        "module, reduction ratio 16 (original publication default)")


NETWORKS = {
    "alexnet": alexnet,
    "squeezenet_v1_0": squeezenet_v10,
    "squeezenet_v1_1": squeezenet_v11,
    "sqnxt_1_0_g_23": lambda: squeezenext("1.0-G-SqNxt-23", 1.0, (6, 6, 8, 1), grouped=True),
    "sqnxt_1_0_23": lambda: squeezenext("1.0-SqNxt-23", 1.0, (6, 6, 8, 1), reference=True),
    "sqnxt_1_0_23v5": lambda: squeezenext("1.0-SqNxt-23v5", 1.0, (2, 4, 14, 1)),
    "sqnxt_2_0_23": lambda: squeezenext("2.0-SqNxt-23", 2.0, (6, 6, 8, 1)),
    "sqnxt_2_0_23v5": lambda: squeezenext("2.0-SqNxt-23v5", 2.0, (2, 4, 14, 1)),
    "mobilenet_v1": mobilenet_v1,
    "mobilenet_v2": mobilenet_v2,
    "shufflenet_v1": shufflenet_v1,
    "shufflenet_v2": shufflenet_v2,
    "densenet121": densenet121,
    "googlenet": googlenet,
    "inception_v2": inception_v2,
    "se_bn_inception": se_bn_inception,
}


# Kernel shares (gemv2T, gemv2N, gemmk1) in percent of one training
# iteration, as profiled on a P100 with cuBLAS.
OBSERVED_MIX = {
    "AlexNet": (0.0, 0.0, 0.0),
    "SqueezeNet-V1.0": (0.0, 0.0, 0.0),
    "SqueezeNet-V1.1": (0.0, 0.0, 0.0),
    "1.0-G-SqNxt-23": (34.53, 5.33, 9.13),
    "1.0-SqNxt-23": (36.53, 5.64, 9.66),
    "1.0-SqNxt-23v5": (27.78, 6.35, 10.85),
    "2.0-SqNxt-23": (30.65, 4.75, 8.25),
    "2.0-SqNxt-23v5": (21.49, 4.94, 8.35),
    "MobileNet-V1": (59.23, 30.55, 0.63),
    "MobileNet-V2": (60.31, 28.79, 0.80),
    "ShuffleNet-V1": (45.37, 29.50, 4.39),
    "ShuffleNet-V2": (43.81, 30.58, 3.39),
    "DenseNet-121": (18.19, 3.66, 7.32),
    "GoogLeNet": (0.18, 0.18, 0.05),
    "Inception-V2": (5.12, 0.03, 3.69),
    "SE-BN-Inception": (5.75, 0.03, 3.35),
}


def stats(doc):
    shape = {"input": (doc["input_channels"], doc["input_size"])}
    p = a = mc = 0
    a += doc["input_channels"] * doc["input_size"] ** 2
    for layer in doc["layers"]:
        kind = layer["kind"]
        src_n, src_s = shape[layer["fan_in"][0]]
        n = layer["N"]
        if kind in ("standard-conv", "pointwise-conv", "depthwise-conv",
                    "group-conv"):
            k, kw = layer["S_F"], layer.get("S_Fw", layer["S_F"])
            s = out_side(src_s, max(k, kw), layer["stride"], layer["padding"])
            w = n * (layer["M"] // layer["groups"]) * k * kw
            p += w
            mc += w * s * s
        elif kind == "fully-connected":
            s = 1
            p += layer["M"] * n
            mc += layer["M"] * n
        elif kind == "pool":
            s = out_side(src_s, layer["S_F"], layer["stride"], layer["padding"],
                         layer.get("pad", 0))
        else:
            s = src_s
        shape[layer["id"]] = (n, s)
        a += n * s * s * (1 + len(layer.get("post", [])))
    return p, a, mc


def main():
    root = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "..")
    out_dir = os.path.join(root, "core", "zoo")
    os.makedirs(out_dir, exist_ok=True)
    for key, build in NETWORKS.items():
        doc = build().doc
        t, n, k = OBSERVED_MIX[doc["name"]]
        doc["observed_kernel_mix"] = {"gemv2t_pct": t, "gemv2n_pct": n,
                                      "gemmk1_pct": k}
        with open(os.path.join(out_dir, key + ".json"), "w") as f:
            json.dump(doc, f, indent=1)
            f.write("\n")
        if "--stats" in sys.argv:
            p, a, mc = stats(doc)
            print(f"{doc['name']:18s} P={p / 1e6:7.3f} A={a / 1e6:7.3f} "
                  f"Mc={mc / 1e6:8.2f} A/P={a / p:6.2f} Mc/P={mc / p:7.2f} "
                  f"Mc/A={mc / a:7.2f}")


if __name__ == "__main__":
    main()
