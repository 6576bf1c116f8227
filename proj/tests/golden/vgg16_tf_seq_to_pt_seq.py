# Generated by nnmig 0.1.0: tf/seq -> pt/seq
# pivot fnv1a64: e5d55cb6ceda28a5

from collections import OrderedDict

import torch
import torch.nn as nn

INPUT_SHAPE = (32, 32, 3)  # channel-last, batch excluded


class Permute(nn.Module):
    def __init__(self, *dims):
        super().__init__()
        self.dims = dims

    def forward(self, x):
        return x.permute(*self.dims)


def build_VGG16():
    return nn.Sequential(OrderedDict([
        ('permute', Permute(0, 3, 1, 2)),
        ('conv2d', nn.Conv2d(3, 64, kernel_size=3, padding=1)),
        ('conv2d_act', nn.ReLU()),
        ('conv2d_1', nn.Conv2d(64, 64, kernel_size=3, padding=1)),
        ('conv2d_1_act', nn.ReLU()),
        ('maxpool2d', nn.MaxPool2d(kernel_size=2)),
        ('conv2d_2', nn.Conv2d(64, 128, kernel_size=3, padding=1)),
        ('conv2d_2_act', nn.ReLU()),
        ('conv2d_3', nn.Conv2d(128, 128, kernel_size=3, padding=1)),
        ('conv2d_3_act', nn.ReLU()),
        ('maxpool2d_1', nn.MaxPool2d(kernel_size=2)),
        ('conv2d_4', nn.Conv2d(128, 256, kernel_size=3, padding=1)),
        ('conv2d_4_act', nn.ReLU()),
        ('conv2d_5', nn.Conv2d(256, 256, kernel_size=3, padding=1)),
        ('conv2d_5_act', nn.ReLU()),
        ('conv2d_6', nn.Conv2d(256, 256, kernel_size=3, padding=1)),
        ('conv2d_6_act', nn.ReLU()),
        ('maxpool2d_2', nn.MaxPool2d(kernel_size=2)),
        ('conv2d_7', nn.Conv2d(256, 512, kernel_size=3, padding=1)),
        ('conv2d_7_act', nn.ReLU()),
        ('conv2d_8', nn.Conv2d(512, 512, kernel_size=3, padding=1)),
        ('conv2d_8_act', nn.ReLU()),
        ('conv2d_9', nn.Conv2d(512, 512, kernel_size=3, padding=1)),
        ('conv2d_9_act', nn.ReLU()),
        ('maxpool2d_3', nn.MaxPool2d(kernel_size=2)),
        ('conv2d_10', nn.Conv2d(512, 512, kernel_size=3, padding=1)),
        ('conv2d_10_act', nn.ReLU()),
        ('conv2d_11', nn.Conv2d(512, 512, kernel_size=3, padding=1)),
        ('conv2d_11_act', nn.ReLU()),
        ('conv2d_12', nn.Conv2d(512, 512, kernel_size=3, padding=1)),
        ('conv2d_12_act', nn.ReLU()),
        ('maxpool2d_4', nn.MaxPool2d(kernel_size=2)),
        ('permute_1', Permute(0, 2, 3, 1)),
        ('flatten', nn.Flatten()),
        ('dropout', nn.Dropout(p=0.5)),
        ('linear', nn.Linear(512, 512)),
        ('linear_act', nn.ReLU()),
        ('dropout_1', nn.Dropout(p=0.5)),
        ('linear_1', nn.Linear(512, 512)),
        ('linear_1_act', nn.ReLU()),
        ('dropout_2', nn.Dropout(p=0.5)),
        ('linear_2', nn.Linear(512, 10)),
    ]))
