# Generated by nnmig 0.1.0: tf/seq -> pt/subc
# pivot fnv1a64: 1cdce797ecc78bfa

import torch
import torch.nn as nn
from torch.utils.data import DataLoader, TensorDataset
from torchvision import datasets, transforms

INPUT_SHAPE = (32, 32, 3)  # channel-last, batch excluded


class AlexNet(nn.Module):
    def __init__(self):
        super().__init__()
        self.conv1 = nn.Conv2d(3, 64, kernel_size=3, stride=2, padding=1)
        self.conv1_act = nn.ReLU()
        self.pool1 = nn.MaxPool2d(kernel_size=2)
        self.conv2 = nn.Conv2d(64, 192, kernel_size=3, padding=1)
        self.conv2_act = nn.ReLU()
        self.pool2 = nn.MaxPool2d(kernel_size=2)
        self.conv3 = nn.Conv2d(192, 384, kernel_size=3, padding=1)
        self.conv3_act = nn.ReLU()
        self.conv4 = nn.Conv2d(384, 256, kernel_size=3, padding=1)
        self.conv4_act = nn.ReLU()
        self.conv5 = nn.Conv2d(256, 256, kernel_size=3, padding=1)
        self.conv5_act = nn.ReLU()
        self.pool3 = nn.MaxPool2d(kernel_size=2)
        self.flatten = nn.Flatten()
        self.drop1 = nn.Dropout(p=0.5)
        self.fc1 = nn.Linear(1024, 4096)
        self.fc1_act = nn.ReLU()
        self.drop2 = nn.Dropout(p=0.5)
        self.fc2 = nn.Linear(4096, 4096)
        self.fc2_act = nn.ReLU()
        self.drop3 = nn.Dropout(p=0.5)
        self.fc3 = nn.Linear(4096, 10)

    def forward(self, x):
        conv1 = self.conv1_act(self.conv1(x.permute(0, 3, 1, 2)))
        pool1 = self.pool1(conv1)
        conv2 = self.conv2_act(self.conv2(pool1))
        pool2 = self.pool2(conv2)
        conv3 = self.conv3_act(self.conv3(pool2))
        conv4 = self.conv4_act(self.conv4(conv3))
        conv5 = self.conv5_act(self.conv5(conv4))
        pool3 = self.pool3(conv5).permute(0, 2, 3, 1)
        flatten = self.flatten(pool3)
        drop1 = self.drop1(flatten)
        fc1 = self.fc1_act(self.fc1(drop1))
        drop2 = self.drop2(fc1)
        fc2 = self.fc2_act(self.fc2(drop2))
        drop3 = self.drop3(fc2)
        fc3 = self.fc3(drop3)
        return fc3


def make_loader(inputs, targets, shuffle=True):
    return DataLoader(TensorDataset(inputs, targets), batch_size=64, shuffle=shuffle)


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


def load_datasets():
    train_set = datasets.ImageFolder('data/cifar10/train', transform=transforms.ToTensor())
    return train_set
