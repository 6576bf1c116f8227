# Generated by nnmig 0.1.0: tf/subc -> pt/seq
# pivot fnv1a64: 65f3b9e20192159a

from collections import OrderedDict

import torch
import torch.nn as nn
from torch.utils.data import DataLoader, TensorDataset

INPUT_SHAPE = (32, 32, 3)  # channel-last, batch excluded


class Permute(nn.Module):
    def __init__(self, *dims):
        super().__init__()
        self.dims = dims

    def forward(self, x):
        return x.permute(*self.dims)


def build_Net():
    return nn.Sequential(OrderedDict([
        ('permute', Permute(0, 3, 1, 2)),
        ('conv2d', nn.Conv2d(3, 32, kernel_size=3)),
        ('conv2d_act', nn.ReLU()),
        ('maxpool2d', nn.MaxPool2d(kernel_size=2)),
        ('conv2d_1', nn.Conv2d(32, 64, kernel_size=3)),
        ('conv2d_1_act', nn.ReLU()),
        ('maxpool2d_1', nn.MaxPool2d(kernel_size=2)),
        ('conv2d_2', nn.Conv2d(64, 64, kernel_size=3)),
        ('conv2d_2_act', nn.ReLU()),
        ('permute_1', Permute(0, 2, 3, 1)),
        ('flatten', nn.Flatten()),
        ('linear', nn.Linear(1024, 64)),
        ('linear_act', nn.ReLU()),
        ('linear_1', nn.Linear(64, 10)),
    ]))


METRICS = ('accuracy',)


def make_loader(inputs, targets, shuffle=True):
    return DataLoader(TensorDataset(inputs, targets), batch_size=32, shuffle=shuffle)


def train(model, inputs, targets):
    loader = make_loader(inputs, targets)
    optimizer = torch.optim.Adam(model.parameters(), lr=0.001)
    criterion = nn.CrossEntropyLoss()
    model.train()
    for epoch in range(10):
        for batch_x, batch_y in loader:
            optimizer.zero_grad()
            out = model(batch_x)
            loss = criterion(out, batch_y)
            loss.backward()
            optimizer.step()
    return model


def evaluate(model, inputs, targets):
    loader = make_loader(inputs, targets, shuffle=False)
    criterion = nn.CrossEntropyLoss()
    model.eval()
    total = 0.0
    with torch.no_grad():
        for batch_x, batch_y in loader:
            out = model(batch_x)
            total += criterion(out, batch_y).item()
    return total / max(len(loader), 1)
